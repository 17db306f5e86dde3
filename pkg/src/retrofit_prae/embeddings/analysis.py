"""
Embedding analysis - cosine similarity matrices and PCA projections
"""

from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np

from retrofit_prae.embeddings.table import EmbeddingTable
from retrofit_prae.utils.errors import RetrofitPraeError


class ZeroVectorError(RetrofitPraeError):
    """Raised when a cosine is requested for a zero vector"""

    pass


class AnalysisError(RetrofitPraeError):
    """Raised for an impossible projection request"""

    pass


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ZeroVectorError("cosine of a zero vector is undefined")
    return float(np.clip((u @ v) / (nu * nv), -1.0, 1.0))


def cosine_matrix(table: EmbeddingTable, words: Sequence[str]) -> np.ndarray:
    """
    Pairwise cosine similarity M[i][j] = cos(v_i, v_j)

    The result is exactly symmetric with a unit diagonal.
    """
    vectors = table.matrix(list(words))
    norms = np.linalg.norm(vectors, axis=1)
    zero = [w for w, n in zip(words, norms) if n == 0.0]
    if zero:
        raise ZeroVectorError(f"zero vectors: {', '.join(zero)}")
    unit = vectors / norms[:, None]
    matrix = np.clip(unit @ unit.T, -1.0, 1.0)
    matrix = 0.5 * (matrix + matrix.T)
    np.fill_diagonal(matrix, 1.0)
    return matrix


@dataclass
class PCAResult:
    """Projection of words onto their top principal components"""

    words: List[str]
    coordinates: np.ndarray  # [n_words, k]
    components: np.ndarray  # [k, dim], unit rows
    explained_variance: np.ndarray  # [k], non-increasing
    explained_ratio: np.ndarray  # [k]
    mean: np.ndarray  # [dim]

    def as_dict(self) -> Dict[str, List[float]]:
        return {w: self.coordinates[i].tolist() for i, w in enumerate(self.words)}


def pca_project(table: EmbeddingTable, words: Sequence[str], k: int) -> PCAResult:
    """
    Project mean-centred word vectors onto the top-k right singular directions

    Components are ordered by decreasing variance; each component's
    largest-magnitude loading is made positive.
    """
    words = list(words)
    data = table.matrix(words)
    n, dim = data.shape
    if not 1 <= k <= min(dim, n):
        raise AnalysisError(f"k must be in 1..{min(dim, n)}, got {k}")

    mean = data.mean(axis=0)
    centered = data - mean
    _, singular, vt = np.linalg.svd(centered, full_matrices=False)
    components = vt[:k].copy()
    for row in components:
        pivot = int(np.argmax(np.abs(row)))
        if row[pivot] < 0:
            row *= -1.0

    variance = singular[:k] ** 2 / n
    total = float((singular**2).sum() / n)
    ratio = variance / total if total > 0 else np.zeros(k)
    return PCAResult(
        words=words,
        coordinates=centered @ components.T,
        components=components,
        explained_variance=variance,
        explained_ratio=ratio,
        mean=mean,
    )
