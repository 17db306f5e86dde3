"""
Model parameters - configuration, initialization and the AE / RET partition

Every learnable array is a named ParamState. Names starting with ``ae.``
belong to the two recurrent autoencoders, names starting with ``ret.`` to
the retrofit layer; training updates exactly one of the two sets per
iteration. The pre-trained embedding table is model input, not a parameter.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field, model_validator

from retrofit_prae.embeddings.table import EmbeddingTable
from retrofit_prae.ndkernel.layers import DenseWeights, LSTMWeights, init_dense, init_lstm
from retrofit_prae.ndkernel.optim import ParamState
from retrofit_prae.ndkernel.rng import RngStream
from retrofit_prae.ndkernel.tape import Tape, Var
from retrofit_prae.utils.errors import RetrofitPraeError

AE_PREFIX = "ae."
RET_PREFIX = "ret."


class VocabularyError(RetrofitPraeError):
    """Raised when a token is not in the model vocabulary"""

    def __init__(self, tokens: Sequence[str]):
        self.tokens = list(tokens)
        super().__init__(f"tokens not in model vocabulary: {', '.join(self.tokens)}")


class ParamGroup(str, Enum):
    AE = "AE"
    RET = "RET"


class ModelConfig(BaseModel):
    """Layer sizes and inference stop rule"""

    embed_dim: int = Field(16, ge=1, description="Pre-trained embedding dimension")
    retrofit_hidden: int = Field(32, ge=1, description="Width of the two hidden retrofit layers")
    hidden: int = Field(64, ge=1, description="LSTM units per direction")
    z_dim: int = Field(64, ge=1, description="Shared latent size of both autoencoders")
    use_retrofit: bool = Field(True, description="False gives the PRAE ablation (identity retrofit)")
    joint_dim: int = Field(10, ge=1)
    visual_dim: int = Field(10, ge=1)
    joint_limit: float = Field(0.8, gt=0.0, description="Generated joints are clamped to +/- this value")
    max_description_len: int = Field(5, ge=1)
    stop_eps: float = Field(0.01, gt=0.0, description="Frame-to-frame change counted as still")
    stop_patience: int = Field(2, ge=1, description="Still frames that end generation once moving")
    t_max: int = Field(40, ge=2, description="Hard cap on generated frames, initial frame included")

    @classmethod
    def for_scale(cls, scale: str) -> "ModelConfig":
        if scale == "full":
            return cls(embed_dim=300, retrofit_hidden=400, hidden=500, z_dim=500, t_max=80)
        return cls()


def param_layout(cfg: ModelConfig, vocab_size: int) -> List[Tuple[str, str, int, int]]:
    """(prefix, kind, fan_in, fan_out) of every layer; kind is "dense" or "lstm" """
    e, u, z = cfg.embed_dim, cfg.hidden, cfg.z_dim
    step_in = cfg.joint_dim + cfg.visual_dim
    layout: List[Tuple[str, str, int, int]] = []
    if cfg.use_retrofit:
        layout += [
            ("ret.l1", "dense", e, cfg.retrofit_hidden),
            ("ret.l2", "dense", cfg.retrofit_hidden, cfg.retrofit_hidden),
            ("ret.l3", "dense", cfg.retrofit_hidden, e),
        ]
    layout += [
        ("ae.dsc.enc.fw", "lstm", e, u),
        ("ae.dsc.enc.bw", "lstm", e, u),
        ("ae.dsc.enc.proj", "dense", 2 * u, z),
        ("ae.dsc.dec.init", "dense", z, u),
        ("ae.dsc.dec.lstm", "lstm", e, u),
        ("ae.dsc.dec.out", "dense", u, vocab_size),
        ("ae.act.enc.fw", "lstm", step_in, u),
        ("ae.act.enc.bw", "lstm", step_in, u),
        ("ae.act.enc.proj", "dense", 2 * u, z),
        ("ae.act.dec.init", "dense", z, u),
        ("ae.act.dec.lstm", "lstm", step_in, u),
        ("ae.act.dec.out", "dense", u, cfg.joint_dim),
    ]
    return layout


@dataclass(frozen=True, eq=False)
class ModelParams:
    """
    All learnable parameters plus the fixed inputs they were built for

    Responsibilities:
    - Hold theta_AE and theta_RET as disjoint named ParamStates
    - Map tokens to vocabulary ids
    - Bind parameters onto a Tape for a forward pass
    """

    config: ModelConfig
    vocabulary: Tuple[str, ...]
    embeddings: EmbeddingTable
    params: Dict[str, ParamState]

    def __post_init__(self) -> None:
        if tuple(self.embeddings.words) != tuple(self.vocabulary):
            raise RetrofitPraeError("embedding table rows must follow the vocabulary order")
        if self.embeddings.dim != self.config.embed_dim:
            raise RetrofitPraeError(
                f"embedding dim {self.embeddings.dim} differs from model embed_dim {self.config.embed_dim}"
            )
        object.__setattr__(self, "_ids", {w: i for i, w in enumerate(self.vocabulary)})

    @property
    def names(self) -> List[str]:
        return list(self.params)

    def group_names(self, group: ParamGroup) -> List[str]:
        prefix = AE_PREFIX if group == ParamGroup.AE else RET_PREFIX
        return [name for name in self.params if name.startswith(prefix)]

    def group(self, group: ParamGroup) -> List[ParamState]:
        return [self.params[name] for name in self.group_names(group)]

    def with_updates(self, states: Iterable[ParamState]) -> "ModelParams":
        """Copy with the given states replacing those of the same name"""
        merged = dict(self.params)
        for state in states:
            if state.name not in merged:
                raise KeyError(f"unknown parameter '{state.name}'")
            merged[state.name] = state
        return ModelParams(self.config, self.vocabulary, self.embeddings, merged)

    def token_ids(self, tokens: Sequence[str]) -> np.ndarray:
        ids = self._ids  # type: ignore[attr-defined]
        missing = [t for t in tokens if t not in ids]
        if missing:
            raise VocabularyError(missing)
        return np.array([ids[t] for t in tokens], dtype=np.int64)

    def token(self, index: int) -> str:
        return self.vocabulary[index]

    def embedding_matrix(self) -> np.ndarray:
        return self.embeddings.matrix(self.vocabulary)

    def bind(self, tape: Tape) -> Dict[str, Var]:
        """Register every parameter on ``tape`` under its name"""
        return {name: tape.param(name, state.value) for name, state in self.params.items()}

    def count(self) -> int:
        return int(sum(state.value.size for state in self.params.values()))

    def bitwise_equal(self, other: "ModelParams") -> bool:
        if self.vocabulary != other.vocabulary or list(self.params) != list(other.params):
            return False
        if self.config != other.config or not self.embeddings.bitwise_equal(other.embeddings):
            return False
        return all(self.params[name].bitwise_equal(other.params[name]) for name in self.params)


def dense_weights(bound: Mapping[str, Var], prefix: str) -> DenseWeights:
    return DenseWeights(bound[f"{prefix}.W"], bound[f"{prefix}.b"])


def lstm_weights(bound: Mapping[str, Var], prefix: str) -> LSTMWeights:
    return LSTMWeights(bound[f"{prefix}.W"], bound[f"{prefix}.b"])


def init_model_params(
    cfg: ModelConfig,
    table: EmbeddingTable,
    vocabulary: Sequence[str],
    seed: int,
) -> ModelParams:
    """
    Randomly initialize theta_AE and theta_RET

    Args:
        cfg: Layer sizes
        table: Pre-trained embeddings covering the vocabulary
        vocabulary: Token order of the output softmax
        seed: Root seed; each layer draws from its own named stream

    Returns:
        Fresh ModelParams with zeroed Adam state
    """
    vocabulary = tuple(vocabulary)
    embeddings = table.restrict(vocabulary)
    if embeddings.dim != cfg.embed_dim:
        cfg = cfg.model_copy(update={"embed_dim": embeddings.dim})
        logger.warning(f"embed_dim set to {embeddings.dim} to match the embedding table")

    root = RngStream(seed).child("init")
    params: Dict[str, ParamState] = {}
    for prefix, kind, fan_in, fan_out in param_layout(cfg, len(vocabulary)):
        rng = root.child(prefix).generator()
        if kind == "lstm":
            W, b = init_lstm(rng, fan_in, fan_out)
        else:
            W, b = init_dense(rng, fan_in, fan_out)
        params[f"{prefix}.W"] = ParamState.fresh(f"{prefix}.W", W)
        params[f"{prefix}.b"] = ParamState.fresh(f"{prefix}.b", b)

    model = ModelParams(cfg, vocabulary, embeddings, params)
    logger.info(
        f"Model initialized (retrofit={cfg.use_retrofit}, vocab={len(vocabulary)}, "
        f"params={model.count()}, ae={len(model.group_names(ParamGroup.AE))}, "
        f"ret={len(model.group_names(ParamGroup.RET))})"
    )
    return model
