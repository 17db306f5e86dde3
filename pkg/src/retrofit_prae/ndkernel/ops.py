"""
Differentiable operations on Tape variables

Each op computes its value with numpy and records a vector-Jacobian product.
Binary elementwise ops follow numpy broadcasting; gradients are summed back
to the operand shape.
"""

from typing import Any, Optional, Sequence, Tuple, Union

import numpy as np

from retrofit_prae.ndkernel.tape import BackpropError, Tape, Var
from retrofit_prae.ndkernel.tensor import NonFiniteError, TensorShapeError

Axis = Optional[Union[int, Tuple[int, ...]]]


def _tape_of(*values: Any) -> Tape:
    for value in values:
        if isinstance(value, Var):
            return value.tape
    raise BackpropError("op needs at least one Var operand")


def _unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, dim in enumerate(shape):
        if dim == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _broadcast_shape(op: str, a: np.ndarray, b: np.ndarray) -> None:
    try:
        np.broadcast_shapes(a.shape, b.shape)
    except ValueError as e:
        raise TensorShapeError(f"{op}: shapes {list(a.shape)} and {list(b.shape)} do not broadcast") from e


def add(a: Any, b: Any) -> Var:
    tape = _tape_of(a, b)
    a, b = tape.lift(a), tape.lift(b)
    _broadcast_shape("add", a.value, b.value)
    sa, sb = a.value.shape, b.value.shape

    def vjp(g):
        return _unbroadcast(g, sa), _unbroadcast(g, sb)

    return tape.record("add", (a, b), a.value + b.value, vjp)


def sub(a: Any, b: Any) -> Var:
    tape = _tape_of(a, b)
    a, b = tape.lift(a), tape.lift(b)
    _broadcast_shape("sub", a.value, b.value)
    sa, sb = a.value.shape, b.value.shape

    def vjp(g):
        return _unbroadcast(g, sa), _unbroadcast(-g, sb)

    return tape.record("sub", (a, b), a.value - b.value, vjp)


def mul(a: Any, b: Any) -> Var:
    tape = _tape_of(a, b)
    a, b = tape.lift(a), tape.lift(b)
    _broadcast_shape("mul", a.value, b.value)
    av, bv = a.value, b.value

    def vjp(g):
        return _unbroadcast(g * bv, av.shape), _unbroadcast(g * av, bv.shape)

    return tape.record("mul", (a, b), av * bv, vjp)


def matmul(a: Var, b: Var) -> Var:
    """Matrix product; ``a`` may be a vector [k] or a matrix [m, k], ``b`` is [k, n]"""
    tape = _tape_of(a, b)
    a, b = tape.lift(a), tape.lift(b)
    av, bv = a.value, b.value
    if av.ndim not in (1, 2) or bv.ndim != 2 or av.shape[-1] != bv.shape[0]:
        raise TensorShapeError(f"matmul: cannot multiply {list(av.shape)} by {list(bv.shape)}")

    def vjp(g):
        grad_a = g @ bv.T
        grad_b = np.outer(av, g) if av.ndim == 1 else av.T @ g
        return grad_a, grad_b

    return tape.record("matmul", (a, b), av @ bv, vjp)


def tanh(a: Var) -> Var:
    y = np.tanh(a.value)

    def vjp(g):
        return (g * (1.0 - y * y),)

    return a.tape.record("tanh", (a,), y, vjp)


def sigmoid(a: Var) -> Var:
    y = 0.5 * (1.0 + np.tanh(0.5 * a.value))

    def vjp(g):
        return (g * y * (1.0 - y),)

    return a.tape.record("sigmoid", (a,), y, vjp)


def log(a: Var) -> Var:
    x = a.value
    if np.any(x <= 0.0):
        raise NonFiniteError("log of a non-positive value")

    def vjp(g):
        return (g / x,)

    return a.tape.record("log", (a,), np.log(x), vjp)


def relu(a: Var) -> Var:
    x = a.value
    active = (x > 0.0).astype(np.float64)

    def vjp(g):
        return (g * active,)

    return a.tape.record("relu", (a,), x * active, vjp)


def clamp(a: Var, low: float, high: float) -> Var:
    """Clip to [low, high]; gradient passes where the input is inside the bounds"""
    x = a.value
    inside = ((x >= low) & (x <= high)).astype(np.float64)

    def vjp(g):
        return (g * inside,)

    return a.tape.record("clamp", (a,), np.clip(x, low, high), vjp)


def softmax(a: Var) -> Var:
    """Softmax over the last axis, stabilized by max-subtraction"""
    x = a.value
    shifted = np.exp(x - x.max(axis=-1, keepdims=True))
    y = shifted / shifted.sum(axis=-1, keepdims=True)

    def vjp(g):
        return (y * (g - (g * y).sum(axis=-1, keepdims=True)),)

    return a.tape.record("softmax", (a,), y, vjp)


def concat(parts: Sequence[Var], axis: int = -1) -> Var:
    tape = _tape_of(*parts)
    parts = [tape.lift(p) for p in parts]
    ndim = parts[0].value.ndim
    for p in parts:
        if p.value.ndim != ndim:
            raise TensorShapeError("concat: operands differ in rank")
    try:
        value = np.concatenate([p.value for p in parts], axis=axis)
    except ValueError as e:
        raise TensorShapeError(f"concat: {e}") from e
    bounds = np.cumsum([p.value.shape[axis] for p in parts])[:-1]

    def vjp(g):
        return tuple(np.split(g, bounds, axis=axis))

    return tape.record("concat", parts, value, vjp)


def slice_last(a: Var, start: int, stop: int) -> Var:
    """Columns [start, stop) of the last axis"""
    x = a.value
    if not 0 <= start < stop <= x.shape[-1]:
        raise TensorShapeError(f"slice [{start}, {stop}) out of range for last dim {x.shape[-1]}")

    def vjp(g):
        grad = np.zeros_like(x)
        grad[..., start:stop] = g
        return (grad,)

    return a.tape.record("slice", (a,), x[..., start:stop], vjp)


def take(table: Var, ids: Any) -> Var:
    """Gather rows of a [V, d] table by integer ids of any shape"""
    index = np.asarray(ids, dtype=np.int64)
    x = table.value
    if x.ndim != 2:
        raise TensorShapeError("take: table must be a matrix")
    if index.size and (index.min() < 0 or index.max() >= x.shape[0]):
        raise TensorShapeError(f"take: ids out of range for {x.shape[0]} rows")

    def vjp(g):
        grad = np.zeros_like(x)
        np.add.at(grad, index, g)
        return (grad,)

    return table.tape.record("take", (table,), x[index], vjp)


def pick(a: Var, index: Any) -> Var:
    """Element ``index[k]`` of row k of a [K, W] matrix, giving [K]"""
    x = a.value
    idx = np.asarray(index, dtype=np.int64)
    if x.ndim != 2 or idx.shape != (x.shape[0],):
        raise TensorShapeError(f"pick: need [K, W] and [K] ids, got {list(x.shape)} and {list(idx.shape)}")
    rows = np.arange(x.shape[0])

    def vjp(g):
        grad = np.zeros_like(x)
        grad[rows, idx] = g
        return (grad,)

    return a.tape.record("pick", (a,), x[rows, idx], vjp)


def stack(parts: Sequence[Var], axis: int = 0) -> Var:
    tape = _tape_of(*parts)
    parts = [tape.lift(p) for p in parts]
    try:
        value = np.stack([p.value for p in parts], axis=axis)
    except ValueError as e:
        raise TensorShapeError(f"stack: {e}") from e

    def vjp(g):
        return tuple(np.take(g, i, axis=axis) for i in range(len(parts)))

    return tape.record("stack", parts, value, vjp)


def reshape(a: Var, shape: Sequence[int]) -> Var:
    x = a.value
    try:
        value = x.reshape(tuple(shape))
    except ValueError as e:
        raise TensorShapeError(f"reshape: {e}") from e

    def vjp(g):
        return (g.reshape(x.shape),)

    return a.tape.record("reshape", (a,), value, vjp)


def sum(a: Var, axis: Axis = None, keepdims: bool = False) -> Var:  # noqa: A001
    x = a.value
    value = np.asarray(x.sum(axis=axis, keepdims=keepdims))

    def vjp(g):
        if axis is not None and not keepdims:
            g = np.expand_dims(g, axis)
        return (np.broadcast_to(g, x.shape).copy(),)

    return a.tape.record("sum", (a,), value, vjp)


def mean(a: Var, axis: Axis = None) -> Var:
    x = a.value
    count = x.size if axis is None else int(np.prod([x.shape[i] for i in np.atleast_1d(axis)]))
    return mul(sum(a, axis=axis), 1.0 / count)


def diag(a: Var) -> Var:
    x = a.value
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise TensorShapeError(f"diag: need a square matrix, got {list(x.shape)}")

    def vjp(g):
        return (np.diag(g),)

    return a.tape.record("diag", (a,), np.diagonal(x).copy(), vjp)


def pairwise_distance(a: Var, b: Var) -> Var:
    """Euclidean distances D[k, j] = ||a_k - b_j|| between rows of [K, Z] and [J, Z]"""
    tape = _tape_of(a, b)
    a, b = tape.lift(a), tape.lift(b)
    av, bv = a.value, b.value
    if av.ndim != 2 or bv.ndim != 2 or av.shape[1] != bv.shape[1]:
        raise TensorShapeError(f"pairwise_distance: shapes {list(av.shape)} and {list(bv.shape)}")
    diff = av[:, None, :] - bv[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=-1))

    def vjp(g):
        # zero distance has no direction; its gradient is taken as 0
        scale = np.divide(g, dist, out=np.zeros_like(dist), where=dist > 0.0)
        weighted = scale[..., None] * diff
        return weighted.sum(axis=1), -weighted.sum(axis=0)

    return tape.record("pairwise_distance", (a, b), dist, vjp)


def detach(a: Var) -> Var:
    """Same value, no gradient flows back"""
    return a.tape.constant(a.value)
