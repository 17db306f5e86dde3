"""
Embedding analysis - how the retrofit layer reshapes the word space

Compares the pre-trained table with the retrofitted one: cosine matrices
in vocabulary order, PCA coordinates, synonym clustering statistics and
the nearest synonym group of every word.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
from loguru import logger

from retrofit_prae.embeddings.analysis import PCAResult, cosine, cosine_matrix, pca_project
from retrofit_prae.embeddings.lexicon import SynonymLexicon
from retrofit_prae.embeddings.synth import group_centroid
from retrofit_prae.embeddings.table import EmbeddingTable
from retrofit_prae.rprae.model import RetrofitPRAE
from retrofit_prae.rprae.params import ModelParams

ANTONYM_PAIR = ("slowly", "fast")


@dataclass(frozen=True)
class ClusterStats:
    """Synonym clustering of one table"""

    intra_mean: float
    inter_mean: float
    antonym_cosine: float

    def to_dict(self) -> dict:
        return {"intra_mean": self.intra_mean, "inter_mean": self.inter_mean, "antonym_cosine": self.antonym_cosine}


def cluster_stats(table: EmbeddingTable, lexicon: SynonymLexicon) -> ClusterStats:
    """Mean intra-group and inter-group cosine over words, and the antonym centroid cosine"""
    words = lexicon.words
    matrix = cosine_matrix(table, words)
    labels = np.array([lexicon.group_of(w).label for w in words])
    same = labels[:, None] == labels[None, :]
    off_diagonal = ~np.eye(len(words), dtype=bool)
    intra = float(matrix[same & off_diagonal].mean())
    inter = float(matrix[~same].mean())
    slow, fast = ANTONYM_PAIR
    antonym = cosine(group_centroid(table, lexicon, slow), group_centroid(table, lexicon, fast))
    return ClusterStats(intra, inter, antonym)


def nearest_groups(table: EmbeddingTable, lexicon: SynonymLexicon) -> Dict[str, str]:
    """Synonym group whose centroid has the highest cosine with each word"""
    centroids = {g.label: group_centroid(table, lexicon, g.label) for g in lexicon.groups}
    nearest: Dict[str, str] = {}
    for word in lexicon.words:
        vector = table.vector(word)
        nearest[word] = max(centroids, key=lambda label: cosine(vector, centroids[label]))
    return nearest


@dataclass
class EmbeddingAnalysis:
    """Before/after view of the description-side word space"""

    vocabulary: List[str]
    input_cosine: np.ndarray
    retrofitted_cosine: np.ndarray
    input_pca: PCAResult
    retrofitted_pca: PCAResult
    input_stats: ClusterStats
    retrofitted_stats: ClusterStats
    input_nearest: Dict[str, str]
    retrofitted_nearest: Dict[str, str]
    retrofitted_table: EmbeddingTable

    def misplaced_words(self, lexicon: SynonymLexicon) -> Dict[str, List[str]]:
        """Words whose nearest group is not their own, before and after"""
        return {
            "input": [w for w, g in self.input_nearest.items() if g != lexicon.group_of(w).label],
            "retrofitted": [w for w, g in self.retrofitted_nearest.items() if g != lexicon.group_of(w).label],
        }

    def to_dict(self, lexicon: SynonymLexicon) -> dict:
        return {
            "vocabulary": self.vocabulary,
            "input_cosine": self.input_cosine.tolist(),
            "retrofitted_cosine": self.retrofitted_cosine.tolist(),
            "input_pca": self.input_pca.as_dict(),
            "retrofitted_pca": self.retrofitted_pca.as_dict(),
            "input_pca_explained_ratio": self.input_pca.explained_ratio.tolist(),
            "retrofitted_pca_explained_ratio": self.retrofitted_pca.explained_ratio.tolist(),
            "input_stats": self.input_stats.to_dict(),
            "retrofitted_stats": self.retrofitted_stats.to_dict(),
            "input_nearest_group": self.input_nearest,
            "retrofitted_nearest_group": self.retrofitted_nearest,
            "misplaced_words": self.misplaced_words(lexicon),
        }


def analyze_embeddings(
    model: ModelParams,
    lexicon: SynonymLexicon,
    table: Optional[EmbeddingTable] = None,
    n_components: int = 3,
) -> EmbeddingAnalysis:
    """
    Compare pre-trained and retrofitted word vectors

    Args:
        model: Trained parameters
        lexicon: Synonym groups; its vocabulary orders the matrices
        table: Pre-trained table, the model's own input table by default
        n_components: PCA components

    Returns:
        EmbeddingAnalysis
    """
    vocabulary = lexicon.vocabulary()
    table = (table or model.embeddings).restrict(vocabulary)
    retrofitted = RetrofitPRAE(model).retrofitted_table().restrict(vocabulary)

    analysis = EmbeddingAnalysis(
        vocabulary=vocabulary,
        input_cosine=cosine_matrix(table, vocabulary),
        retrofitted_cosine=cosine_matrix(retrofitted, vocabulary),
        input_pca=pca_project(table, vocabulary, n_components),
        retrofitted_pca=pca_project(retrofitted, vocabulary, n_components),
        input_stats=cluster_stats(table, lexicon),
        retrofitted_stats=cluster_stats(retrofitted, lexicon),
        input_nearest=nearest_groups(table, lexicon),
        retrofitted_nearest=nearest_groups(retrofitted, lexicon),
        retrofitted_table=retrofitted,
    )
    before, after = analysis.input_stats, analysis.retrofitted_stats
    logger.info(
        f"Embedding analysis: intra {before.intra_mean:.3f} -> {after.intra_mean:.3f}, "
        f"inter {before.inter_mean:.3f} -> {after.inter_mean:.3f}, "
        f"antonym {before.antonym_cosine:.3f} -> {after.antonym_cosine:.3f}"
    )
    return analysis
