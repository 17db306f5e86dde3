"""
Gradient check suite - every differentiable op, the layers and the three
losses against central differences at random points
"""

import time
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List, Tuple

import numpy as np
from loguru import logger

from retrofit_prae.ndkernel import ops
from retrofit_prae.ndkernel.gradcheck import ScalarFn, grad_check
from retrofit_prae.ndkernel.layers import DenseWeights, LSTMWeights, dense, lstm_step
from retrofit_prae.ndkernel.rng import RngStream
from retrofit_prae.ndkernel.tape import Tape, Var
from retrofit_prae.rprae.losses import loss_act, loss_dsc, loss_shr
from retrofit_prae.rprae.retrofit import retrofit_forward

TOLERANCE = 1e-4
STEP = 1e-5
POINTS = 10

Case = Callable[[np.random.Generator], Tuple[ScalarFn, np.ndarray]]


@dataclass
class CheckResult:
    """Worst relative error of one case over all its points"""

    name: str
    max_rel_error: float
    points: int

    @property
    def passed(self) -> bool:
        return self.max_rel_error < TOLERANCE

    def to_dict(self) -> dict:
        return {**asdict(self), "passed": self.passed}


def _weighted(out: Var, w: np.ndarray) -> Var:
    # random weights so no output direction has a degenerate gradient
    return ops.sum(out * w)


def _unary(op: Callable[[Var], Var], shape=(3, 4), positive: bool = False) -> Case:
    def case(rng: np.random.Generator):
        x0 = rng.standard_normal(shape)
        if positive:
            x0 = np.abs(x0) + 0.5
        w = rng.standard_normal(shape)
        return (lambda tape, x: _weighted(op(x), w)), x0

    return case


def _binary(op: Callable[[Var, Var], Var], other_shape=(3, 4)) -> Case:
    def case(rng: np.random.Generator):
        x0 = rng.standard_normal((3, 4))
        other = rng.standard_normal(other_shape)
        w = rng.standard_normal(np.broadcast_shapes((3, 4), other_shape))

        def f(tape: Tape, x: Var) -> Var:
            return _weighted(op(x, tape.constant(other)), w)

        return f, x0

    return case


def _matmul(rng: np.random.Generator):
    x0 = rng.standard_normal((3, 4))
    other = rng.standard_normal((4, 5))
    w = rng.standard_normal((3, 5))
    return (lambda tape, x: _weighted(ops.matmul(x, tape.constant(other)), w)), x0


def _concat(rng: np.random.Generator):
    x0 = rng.standard_normal((3, 4))
    other = rng.standard_normal((3, 2))
    w = rng.standard_normal((3, 6))
    return (lambda tape, x: _weighted(ops.concat([x, tape.constant(other)]), w)), x0


def _take(rng: np.random.Generator):
    x0 = rng.standard_normal((5, 3))
    ids = np.array([[0, 2], [2, 4], [1, 1]])
    w = rng.standard_normal((3, 2, 3))
    return (lambda tape, x: _weighted(ops.take(x, ids), w)), x0


def _pick(rng: np.random.Generator):
    x0 = rng.standard_normal((4, 5))
    index = rng.integers(0, 5, size=4)
    w = rng.standard_normal(4)
    return (lambda tape, x: _weighted(ops.pick(x, index), w)), x0


def _stack(rng: np.random.Generator):
    x0 = rng.standard_normal((3, 4))
    w = rng.standard_normal((3, 3, 4))
    return (lambda tape, x: _weighted(ops.stack([x, ops.tanh(x), x * x], axis=1), w)), x0


def _sum_axis(rng: np.random.Generator):
    x0 = rng.standard_normal((3, 4, 2))
    w = rng.standard_normal((3, 1, 2))
    return (lambda tape, x: _weighted(ops.sum(x, axis=1, keepdims=True), w)), x0


def _pairwise(rng: np.random.Generator):
    x0 = rng.standard_normal((3, 4))
    other = rng.standard_normal((5, 4))
    w = rng.standard_normal((3, 5))
    return (lambda tape, x: _weighted(ops.pairwise_distance(x, tape.constant(other)), w)), x0


def _dense_input(rng: np.random.Generator):
    W, b = rng.standard_normal((4, 3)), rng.standard_normal(3)
    x0 = rng.standard_normal((2, 4))
    w = rng.standard_normal((2, 3))

    def f(tape: Tape, x: Var) -> Var:
        return _weighted(dense(x, DenseWeights(tape.constant(W), tape.constant(b)), "tanh"), w)

    return f, x0


def _dense_weights(rng: np.random.Generator):
    inputs, b = rng.standard_normal((2, 4)), rng.standard_normal(3)
    x0 = rng.standard_normal((4, 3))
    w = rng.standard_normal((2, 3))

    def f(tape: Tape, x: Var) -> Var:
        return _weighted(dense(tape.constant(inputs), DenseWeights(x, tape.constant(b)), "tanh"), w)

    return f, x0


def _lstm_unroll(tape: Tape, inputs: Var, W: Var, b: Var, hidden: int) -> Var:
    K, T, d = inputs.shape
    flat = ops.reshape(inputs, (K, T * d))
    h = tape.constant(np.zeros((K, hidden)))
    c = tape.constant(np.zeros((K, hidden)))
    outs = []
    for t in range(T):
        h, c = lstm_step(ops.slice_last(flat, t * d, (t + 1) * d), h, c, LSTMWeights(W, b))
        outs.append(h)
    return ops.stack(outs, axis=1)


def _lstm_input(rng: np.random.Generator):
    d, u = 3, 4
    W, b = 0.5 * rng.standard_normal((d + u, 4 * u)), 0.1 * rng.standard_normal(4 * u)
    x0 = rng.standard_normal((2, 3, d))
    w = rng.standard_normal((2, 3, u))
    return (lambda tape, x: _weighted(_lstm_unroll(tape, x, tape.constant(W), tape.constant(b), u), w)), x0


def _lstm_weights(rng: np.random.Generator):
    d, u = 3, 4
    inputs, b = rng.standard_normal((2, 3, d)), 0.1 * rng.standard_normal(4 * u)
    x0 = 0.5 * rng.standard_normal((d + u, 4 * u))
    w = rng.standard_normal((2, 3, u))
    return (lambda tape, x: _weighted(_lstm_unroll(tape, tape.constant(inputs), x, tape.constant(b), u), w)), x0


def _retrofit_mlp(rng: np.random.Generator):
    e, hidden = 4, 5
    shapes = {"ret.l1": (e, hidden), "ret.l2": (hidden, hidden), "ret.l3": (hidden, e)}
    weights = {
        f"{prefix}.{part}": 0.5 * rng.standard_normal(shape if part == "W" else shape[1])
        for prefix, shape in shapes.items()
        for part in ("W", "b")
    }
    x0 = rng.standard_normal((3, e))
    w = rng.standard_normal((3, e))

    def f(tape: Tape, x: Var) -> Var:
        bound = {name: tape.constant(value) for name, value in weights.items()}
        return _weighted(retrofit_forward(bound, x), w)

    return f, x0


def _loss_dsc(rng: np.random.Generator):
    K, steps, V = 3, 4, 6
    targets = rng.integers(0, V, size=(K, steps))
    x0 = rng.standard_normal((steps * K, V))

    def f(tape: Tape, x: Var) -> Var:
        probs = [ops.softmax(ops.take(x, np.arange(t * K, (t + 1) * K))) for t in range(steps)]
        return loss_dsc(probs, targets)

    return f, x0


def _loss_act(rng: np.random.Generator):
    target = rng.standard_normal((3, 5, 4))
    x0 = rng.standard_normal((3, 5, 4))
    lengths = [5, 3, 4]
    return (lambda tape, x: loss_act(x, target, lengths)), x0


def _loss_shr(rng: np.random.Generator):
    z_dsc = rng.standard_normal((4, 3))
    x0 = rng.standard_normal((4, 3))
    return (lambda tape, x: loss_shr(x, tape.constant(z_dsc), margin=1.0)), x0


CASES: Dict[str, Case] = {
    "add": _binary(ops.add, (1, 4)),
    "sub": _binary(ops.sub),
    "mul": _binary(ops.mul, (3, 1)),
    "matmul": _matmul,
    "tanh": _unary(ops.tanh),
    "sigmoid": _unary(ops.sigmoid),
    "log": _unary(ops.log, positive=True),
    "relu": _unary(ops.relu),
    "clamp": _unary(lambda x: ops.clamp(x, -0.5, 0.5)),
    "softmax": _unary(ops.softmax),
    "concat": _concat,
    "slice_last": _unary(lambda x: ops.slice_last(x, 1, 3)),
    "take": _take,
    "pick": _pick,
    "stack": _stack,
    "reshape": _unary(lambda x: ops.tanh(ops.reshape(x, (2, 6))) * np.arange(12.0).reshape(2, 6), shape=(3, 4)),
    "sum": _sum_axis,
    "mean": _unary(lambda x: ops.mean(x * x, axis=0)),
    "diag": _unary(lambda x: ops.diag(x), shape=(4, 4)),
    "pairwise_distance": _pairwise,
    "dense.input": _dense_input,
    "dense.weights": _dense_weights,
    "lstm.input": _lstm_input,
    "lstm.weights": _lstm_weights,
    "retrofit_mlp": _retrofit_mlp,
    "loss_dsc": _loss_dsc,
    "loss_act": _loss_act,
    "loss_shr": _loss_shr,
}


def run_gradcheck(seed: int = 0, points: int = POINTS, h: float = STEP) -> List[CheckResult]:
    """
    Check every case at ``points`` random points

    Args:
        seed: Root seed of the random points
        points: Points per case
        h: Central-difference step

    Returns:
        One CheckResult per case, in suite order
    """
    started = time.perf_counter()
    root = RngStream(seed).child("gradcheck")
    results = []
    for name, case in CASES.items():
        worst = 0.0
        for point in range(points):
            f, x0 = case(root.child(name, point).generator())
            worst = max(worst, grad_check(f, x0, h))
        results.append(CheckResult(name, worst, points))
        logger.debug(f"gradcheck {name}: max rel error {worst:.3e}")

    failed = [r.name for r in results if not r.passed]
    logger.info(
        f"Gradient check finished ({len(results)} cases, {len(failed)} failed, "
        f"{time.perf_counter() - started:.1f}s)"
    )
    return results


def worst_case(results: List[CheckResult]) -> CheckResult:
    return max(results, key=lambda r: r.max_rel_error)
