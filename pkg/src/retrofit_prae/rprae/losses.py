"""
Losses - description reconstruction, action reconstruction and binding

L_dsc and L_act are the batch means of the per-sample reconstruction
losses; L_shr sums the margin loss over the batch, anchored on the action
codes only.
"""

from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np

from retrofit_prae.ndkernel import ops
from retrofit_prae.ndkernel.tape import Var
from retrofit_prae.ndkernel.tensor import TensorShapeError
from retrofit_prae.utils.errors import RetrofitPraeError


class LossDomainError(RetrofitPraeError):
    """Raised when a target token has probability <= 0"""

    pass


def loss_dsc(probs: Sequence[Var], next_ids: np.ndarray) -> Var:
    """
    Cross-entropy of next-token prediction

    Args:
        probs: T_d - 1 distributions, each [K, W] (or [W] for one sample)
        next_ids: Target ids [K, T_d - 1], the tokens 2 .. T_d

    Returns:
        mean_k (1 / (T_d - 1)) sum_t -log y_t(x_{t+1})
    """
    if not probs:
        raise TensorShapeError("loss_dsc needs at least one prediction step (T_d >= 2)")
    targets = np.atleast_2d(np.asarray(next_ids, dtype=np.int64))
    steps = [p if len(p.shape) == 2 else ops.reshape(p, (1, p.shape[0])) for p in probs]
    K = steps[0].shape[0]
    if targets.shape != (K, len(steps)):
        raise TensorShapeError(f"targets {list(targets.shape)} do not match {len(steps)} steps of batch {K}")

    total = None
    for t, y in enumerate(steps):
        picked = ops.pick(y, targets[:, t])
        if np.any(picked.value <= 0.0):
            k = int(np.flatnonzero(picked.value <= 0.0)[0])
            raise LossDomainError(f"probability {picked.value[k]!r} at target id {targets[k, t]} (item {k}, step {t + 1})")
        term = ops.sum(ops.log(picked))
        total = term if total is None else total + term
    return total * (-1.0 / (len(steps) * K))


def loss_act(pred: Var, target: np.ndarray, lengths: Optional[Sequence[int]] = None) -> Var:
    """
    Mean squared frame error over steps 2 .. T_a

    Args:
        pred: Predicted frames [K, T, D] (or [T, D]); index 0 is ignored
        target: Ground-truth frames, same shape
        lengths: True length per item when the batch is padded

    Returns:
        mean_k (1 / (T_k - 1)) sum_{t=1}^{T_k-1} ||j_t - pred_t||^2
    """
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape:
        raise TensorShapeError(f"loss_act: prediction {list(pred.shape)} and target {list(target.shape)} differ")
    if target.ndim == 2:
        pred = ops.reshape(pred, (1,) + target.shape)
        target = target[None]
    K, T, _ = target.shape
    lengths = np.full(K, T) if lengths is None else np.asarray(lengths, dtype=np.int64)
    if np.any(lengths < 2) or np.any(lengths > T):
        raise TensorShapeError("loss_act needs 2 <= T_a <= padded length for every item")

    # frame 0 is given, not predicted
    steps = np.arange(T)[None, :]
    valid = (steps >= 1) & (steps < lengths[:, None])
    weights = valid / (lengths[:, None] - 1.0) / K

    diff = pred - target
    per_step = ops.sum(diff * diff, axis=2)
    return ops.sum(per_step * weights)


def loss_shr(z_act: Var, z_dsc: Var, margin: float = 1.0) -> Var:
    """
    Binding loss

    sum_k psi(a_k, d_k) + sum_k sum_{j != k} max(0, margin + psi(a_k, d_k) - psi(a_k, d_j)),
    psi the Euclidean distance.
    """
    if z_act.shape != z_dsc.shape or len(z_act.shape) != 2:
        raise TensorShapeError(f"loss_shr: codes {list(z_act.shape)} and {list(z_dsc.shape)} must both be [K, Z]")
    K = z_act.shape[0]
    dist = ops.pairwise_distance(z_act, z_dsc)
    matched = ops.diag(dist)
    hinge = ops.relu(ops.reshape(matched, (K, 1)) - dist + margin)
    off_diagonal = 1.0 - np.eye(K)
    return ops.sum(matched) + ops.sum(hinge * off_diagonal)


@dataclass(frozen=True)
class LossBreakdown:
    """The three losses and their unweighted sum"""

    dsc: Var
    act: Var
    shr: Var
    total: Var

    def values(self) -> Dict[str, float]:
        return {
            "L_dsc": float(self.dsc.value),
            "L_act": float(self.act.value),
            "L_shr": float(self.shr.value),
            "L_all": float(self.total.value),
        }


def total_loss(dsc: Var, act: Var, shr: Var) -> LossBreakdown:
    return LossBreakdown(dsc, act, shr, dsc + act + shr)
