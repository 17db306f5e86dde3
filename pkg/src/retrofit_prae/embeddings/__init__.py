"""Pre-trained word embeddings: lexicon, loading, synthesis, analysis"""

from retrofit_prae.embeddings.analysis import (
    AnalysisError,
    PCAResult,
    ZeroVectorError,
    cosine,
    cosine_matrix,
    pca_project,
)
from retrofit_prae.embeddings.lexicon import (
    BOS,
    EOS,
    MERGED_SYMBOL,
    SLOT_ORDER,
    PartOfSpeech,
    SynonymGroup,
    SynonymLexicon,
)
from retrofit_prae.embeddings.synth import SynthConfig, group_centroid, synth_pretrained
from retrofit_prae.embeddings.table import (
    EmbeddingParseError,
    EmbeddingTable,
    MissingWordError,
    load_embedding_file,
    save_embedding_file,
)

__all__ = [
    "AnalysisError",
    "PCAResult",
    "ZeroVectorError",
    "cosine",
    "cosine_matrix",
    "pca_project",
    "BOS",
    "EOS",
    "MERGED_SYMBOL",
    "SLOT_ORDER",
    "PartOfSpeech",
    "SynonymGroup",
    "SynonymLexicon",
    "SynthConfig",
    "group_centroid",
    "synth_pretrained",
    "EmbeddingParseError",
    "EmbeddingTable",
    "MissingWordError",
    "load_embedding_file",
    "save_embedding_file",
]
