"""
Layers - Dense and LSTM building blocks plus parameter initialization

LSTM gates are packed [i, f, g, o] along the columns of one weight matrix
acting on concat(x, h).
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from retrofit_prae.ndkernel import ops
from retrofit_prae.ndkernel.tape import Var
from retrofit_prae.ndkernel.tensor import TensorShapeError

FORGET_BIAS = 1.0


@dataclass(frozen=True)
class DenseWeights:
    """Affine map x @ W + b"""

    W: Var
    b: Var


@dataclass(frozen=True)
class LSTMWeights:
    """LSTM cell weights: W is [d + u, 4u], b is [4u]"""

    W: Var
    b: Var

    @property
    def hidden(self) -> int:
        return self.b.value.shape[-1] // 4


def dense(x: Var, weights: DenseWeights, activation: Optional[str] = None) -> Var:
    out = ops.matmul(x, weights.W) + weights.b
    if activation is None:
        return out
    if activation == "tanh":
        return ops.tanh(out)
    raise ValueError(f"unknown activation '{activation}'")


def lstm_step(x: Var, h: Var, c: Var, weights: LSTMWeights) -> Tuple[Var, Var]:
    """
    One LSTM step

    Args:
        x: Input [d] or [K, d]
        h: Hidden state [u] or [K, u]
        c: Cell state [u] or [K, u]
        weights: Packed cell weights

    Returns:
        (h', c') with c' = f*c + i*g and h' = o*tanh(c')
    """
    u = weights.hidden
    W = weights.W.value
    if W.ndim != 2 or W.shape[1] != 4 * u:
        raise TensorShapeError(f"lstm_step: W {list(W.shape)} does not match 4u = {4 * u}")
    if h.shape[-1] != u or c.shape[-1] != u:
        raise TensorShapeError(f"lstm_step: state dims {h.shape[-1]}/{c.shape[-1]} differ from u = {u}")
    if x.shape[-1] + u != W.shape[0]:
        raise TensorShapeError(f"lstm_step: input dim {x.shape[-1]} + u = {u} differs from W rows {W.shape[0]}")

    gates = ops.matmul(ops.concat([x, h]), weights.W) + weights.b
    i = ops.sigmoid(ops.slice_last(gates, 0, u))
    f = ops.sigmoid(ops.slice_last(gates, u, 2 * u))
    g = ops.tanh(ops.slice_last(gates, 2 * u, 3 * u))
    o = ops.sigmoid(ops.slice_last(gates, 3 * u, 4 * u))
    c_next = f * c + i * g
    h_next = o * ops.tanh(c_next)
    return h_next, c_next


def glorot_uniform(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    """Uniform in +/- sqrt(6 / (fan_in + fan_out))"""
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def init_dense(rng: np.random.Generator, fan_in: int, fan_out: int) -> Tuple[np.ndarray, np.ndarray]:
    return glorot_uniform(rng, fan_in, fan_out), np.zeros(fan_out)


def init_lstm(rng: np.random.Generator, input_dim: int, hidden: int) -> Tuple[np.ndarray, np.ndarray]:
    W = glorot_uniform(rng, input_dim + hidden, 4 * hidden)
    b = np.zeros(4 * hidden)
    b[hidden : 2 * hidden] = FORGET_BIAS
    return W, b
