"""
Finite-difference verification of analytic gradients
"""

from typing import Callable, Union

import numpy as np

from retrofit_prae.ndkernel.tape import Tape, Var, backprop_arrays
from retrofit_prae.ndkernel.tensor import NonFiniteError, Tensor

ScalarFn = Callable[[Tape, Var], Var]


def _evaluate(f: ScalarFn, x: np.ndarray) -> float:
    tape = Tape(grad_enabled=False)
    out = f(tape, tape.leaf(x))
    value = float(np.asarray(out.value).reshape(-1)[0])
    if not np.isfinite(value):
        raise NonFiniteError("function value is not finite")
    return value


def grad_check(f: ScalarFn, x0: Union[Tensor, np.ndarray], h: float = 1e-5) -> float:
    """
    Max relative error between backprop and central differences

    Args:
        f: Builds a scalar on the given tape from the input variable
        x0: Point to check at
        h: Finite-difference step

    Returns:
        max_i |analytic_i - numeric_i| / max(|analytic_i|, |numeric_i|, 1e-8)
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    x = (x0.numpy() if isinstance(x0, Tensor) else np.array(x0, dtype=np.float64)).copy()

    tape = Tape()
    leaf = tape.leaf(x)
    out = f(tape, leaf)
    if not np.all(np.isfinite(out.value)):
        raise NonFiniteError("function value is not finite")
    analytic = backprop_arrays(tape, out)[leaf.id]

    numeric = np.zeros_like(x)
    for index in np.ndindex(x.shape):
        plus = x.copy()
        plus[index] += h
        minus = x.copy()
        minus[index] -= h
        numeric[index] = (_evaluate(f, plus) - _evaluate(f, minus)) / (2.0 * h)

    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-8)
    return float(np.max(np.abs(analytic - numeric) / denom))
