"""
Dynamic time warping between two sequences of d-dimensional frames

D(i, j) = d(a_i, b_j) + min(D(i-1, j), D(i, j-1), D(i-1, j-1)) with a
Euclidean local cost; the score is D(|a|, |b|), unnormalized by default.
"""

from typing import List, Tuple

import numpy as np

from retrofit_prae.utils.errors import RetrofitPraeError


class SequenceError(RetrofitPraeError):
    """Raised for an empty sequence or mismatched frame dimensions"""

    pass


def _as_frames(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise SequenceError(f"{name} must be a non-empty sequence of vectors")
    return arr


def local_costs(a, b) -> np.ndarray:
    """Euclidean distance between every frame of ``a`` and every frame of ``b``"""
    a, b = _as_frames(a, "a"), _as_frames(b, "b")
    if a.shape[1] != b.shape[1]:
        raise SequenceError(f"frame dimensions differ: {a.shape[1]} vs {b.shape[1]}")
    diff = a[:, None, :] - b[None, :, :]
    return np.sqrt((diff * diff).sum(axis=-1))


def accumulated_costs(a, b) -> np.ndarray:
    """Accumulated cost matrix padded with an infinite first row and column"""
    cost = local_costs(a, b)
    r, c = cost.shape
    D = np.full((r + 1, c + 1), np.inf)
    D[0, 0] = 0.0
    for i in range(1, r + 1):
        for j in range(1, c + 1):
            D[i, j] = cost[i - 1, j - 1] + min(D[i - 1, j], D[i, j - 1], D[i - 1, j - 1])
    return D


def warping_path(D: np.ndarray) -> List[Tuple[int, int]]:
    """Optimal alignment recovered from an accumulated cost matrix"""
    i, j = D.shape[0] - 1, D.shape[1] - 1
    path = [(i - 1, j - 1)]
    while i > 1 or j > 1:
        step = int(np.argmin((D[i - 1, j - 1], D[i - 1, j], D[i, j - 1])))
        if step == 0:
            i, j = i - 1, j - 1
        elif step == 1:
            i -= 1
        else:
            j -= 1
        path.append((i - 1, j - 1))
    path.reverse()
    return path


def dtw(a, b, normalize: bool = False) -> float:
    """
    DTW cost of aligning ``a`` with ``b``

    Args:
        a: [T_a, d] frames (or a 1-D sequence of scalars)
        b: [T_b, d] frames
        normalize: Divide by the length of the optimal warping path

    Returns:
        Accumulated Euclidean cost
    """
    D = accumulated_costs(a, b)
    score = float(D[-1, -1])
    if normalize:
        score /= len(warping_path(D))
    return score
