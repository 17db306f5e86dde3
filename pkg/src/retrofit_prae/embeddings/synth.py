"""
Synthetic pre-trained embeddings

Stands in for a downloaded word2vec release. The geometry mimics the
distributional hypothesis: synonyms cluster around a group centroid, groups
of the same part of speech share a direction, and the two adverb groups
(slowly / fast) start almost parallel, as antonyms seen in the same
contexts do.
"""

from typing import Dict, List, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field, field_validator

from retrofit_prae.embeddings.lexicon import PartOfSpeech, SynonymLexicon
from retrofit_prae.embeddings.table import EmbeddingTable
from retrofit_prae.ndkernel.rng import RngStream

MIN_DIM = 8

SLOW_GROUP = "slowly"
FAST_GROUP = "fast"


class SynthConfig(BaseModel):
    """Knobs of the synthetic embedding generator"""

    intra_noise: float = Field(0.1, ge=0.0, description="Per-component std of member noise around the centroid")
    antonym_gap: float = Field(0.1, gt=0.0, lt=1.0, description="slowly/fast centroid cosine is at least 1 - gap")
    pos_coherence: float = Field(0.5, ge=0.0, le=1.0, description="Weight of the shared part-of-speech direction")
    blends: Dict[str, Tuple[str, float]] = Field(
        default_factory=dict,
        description="word -> (other group label, weight): pull a member toward another group",
    )

    @field_validator("blends")
    @classmethod
    def _check_blends(cls, value: Dict[str, Tuple[str, float]]) -> Dict[str, Tuple[str, float]]:
        for word, (_, weight) in value.items():
            if not 0.0 <= weight <= 1.0:
                raise ValueError(f"blend weight for '{word}' must be in [0, 1]")
        return value


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _random_unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    return _unit(rng.standard_normal(dim))


def _orthogonal_unit(rng: np.random.Generator, base: np.ndarray) -> np.ndarray:
    v = rng.standard_normal(base.shape[0])
    v = v - (v @ base) * base
    return _unit(v)


def synth_pretrained(
    lexicon: SynonymLexicon,
    dim: int,
    seed: int,
    cfg: SynthConfig = SynthConfig(),
) -> EmbeddingTable:
    """
    Build a deterministic embedding table for the lexicon vocabulary

    Args:
        lexicon: Synonym groups and symbols to embed
        dim: Embedding dimension (>= 8)
        seed: Root seed
        cfg: Generator configuration

    Returns:
        Table in lexicon vocabulary order
    """
    if dim < MIN_DIM:
        raise ValueError(f"embedding dim must be at least {MIN_DIM}, got {dim}")
    stream = RngStream(seed).child("embeddings", "synthetic")
    rng = stream.child("centroids").generator()

    pos_dirs = {pos: _random_unit(rng, dim) for pos in PartOfSpeech}
    centroids: Dict[str, np.ndarray] = {}
    for group in lexicon.groups:
        own = _random_unit(rng, dim)
        centroids[group.label] = _unit(cfg.pos_coherence * pos_dirs[group.pos] + (1.0 - cfg.pos_coherence) * own)

    # antonyms: fast is rebuilt next to slowly, well inside the allowed band
    if SLOW_GROUP in centroids and FAST_GROUP in centroids:
        target = 1.0 - cfg.antonym_gap / 4.0
        slow = centroids[SLOW_GROUP]
        centroids[FAST_GROUP] = target * slow + np.sqrt(1.0 - target * target) * _orthogonal_unit(rng, slow)

    member_rng = stream.child("members").generator()
    entries: List[Tuple[str, np.ndarray]] = []
    vectors: Dict[str, np.ndarray] = {}
    for group in lexicon.groups:
        noise = np.zeros((len(group.members), dim))
        if cfg.intra_noise > 0:
            noise = member_rng.normal(0.0, cfg.intra_noise, size=noise.shape)
            # zero-sum noise keeps the member mean on the centroid direction
            noise -= noise.mean(axis=0)
        for word, offset in zip(group.members, noise):
            vectors[word] = _unit(centroids[group.label] + offset)

    for word, (other, weight) in cfg.blends.items():
        if word not in vectors:
            raise ValueError(f"blend word '{word}' is not in the lexicon")
        if other not in centroids:
            raise ValueError(f"blend target '{other}' is not a synonym group")
        vectors[word] = _unit((1.0 - weight) * vectors[word] + weight * centroids[other])

    for word in lexicon.words:
        entries.append((word, vectors[word]))

    symbol_rng = stream.child("symbols").generator()
    for symbol in lexicon.symbols:
        entries.append((symbol, _random_unit(symbol_rng, dim)))

    logger.debug(f"Synthesized {len(entries)} embeddings (dim={dim}, seed={seed})")
    return EmbeddingTable(entries)


def group_centroid(table: EmbeddingTable, lexicon: SynonymLexicon, label: str) -> np.ndarray:
    """Mean vector of a synonym group's members"""
    return table.matrix(list(lexicon.group(label).members)).mean(axis=0)
