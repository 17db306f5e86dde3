"""
Checkpoints - parameters, Adam state and the configuration that produced them

Layout (keys sorted, floats in shortest round-trip form):
{"version": 1,
 "config": {"model", "vocabulary", "embeddings", "train", "completed_iterations"},
 "params": {name: {"shape", "data"}},
 "adam": {name: {"m", "v", "step"}}}
"""

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Union

import orjson
from loguru import logger
from pydantic import ValidationError

from retrofit_prae.embeddings.table import EmbeddingTable
from retrofit_prae.ndkernel.optim import ParamState
from retrofit_prae.ndkernel.tensor import Tensor
from retrofit_prae.rprae.params import ModelConfig, ModelParams, param_layout
from retrofit_prae.trainer.config import TrainConfig
from retrofit_prae.utils.errors import RetrofitPraeError

CHECKPOINT_VERSION = 1


class CheckpointError(RetrofitPraeError):
    """Raised for an unreadable or inconsistent checkpoint file"""

    pass


class CheckpointVersionError(CheckpointError):
    """Raised when the file's version field is not the supported one"""

    pass


@dataclass(frozen=True, eq=False)
class Checkpoint:
    """A loaded checkpoint"""

    model: ModelParams
    train: Optional[TrainConfig] = None
    completed_iterations: int = 0


def _encode(model: ModelParams, train: Optional[TrainConfig], completed_iterations: int) -> bytes:
    config = {
        "model": model.config.model_dump(mode="json"),
        "vocabulary": list(model.vocabulary),
        "embeddings": {word: vector.tolist() for word, vector in model.embeddings.items()},
        "train": train.model_dump(mode="json") if train is not None else None,
        "completed_iterations": completed_iterations,
    }
    params = {
        name: {"shape": list(state.value.shape), "data": state.value.data.tolist()}
        for name, state in model.params.items()
    }
    adam = {
        name: {"m": state.adam_m.data.tolist(), "v": state.adam_v.data.tolist(), "step": state.step}
        for name, state in model.params.items()
    }
    document = {"version": CHECKPOINT_VERSION, "config": config, "params": params, "adam": adam}
    return orjson.dumps(document, option=orjson.OPT_SORT_KEYS)


def save_checkpoint(
    model: ModelParams,
    path: Union[str, Path],
    train: Optional[TrainConfig] = None,
    completed_iterations: int = 0,
) -> Path:
    """
    Write a checkpoint atomically

    Args:
        model: Parameters with Adam state
        path: Destination file
        train: Training configuration to store for resuming
        completed_iterations: Iterations already applied to ``model``

    Returns:
        Path written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = _encode(model, train, completed_iterations)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as f:
        f.write(payload)
    os.replace(tmp, path)
    logger.info(f"Checkpoint saved: {path} (iterations={completed_iterations}, bytes={len(payload)})")
    return path


def _decode(document: dict) -> Checkpoint:
    version = document.get("version")
    if version != CHECKPOINT_VERSION:
        raise CheckpointVersionError(f"unsupported checkpoint version {version!r} (expected {CHECKPOINT_VERSION})")

    config = document["config"]
    model_cfg = ModelConfig.model_validate(config["model"])
    vocabulary = tuple(config["vocabulary"])
    vectors = config["embeddings"]
    embeddings = EmbeddingTable([(word, vectors[word]) for word in vocabulary])

    stored = document["params"]
    adam = document["adam"]
    expected = [f"{prefix}.{part}" for prefix, _, _, _ in param_layout(model_cfg, len(vocabulary)) for part in ("W", "b")]
    if sorted(expected) != sorted(stored) or sorted(expected) != sorted(adam):
        raise CheckpointError("checkpoint parameters do not match the model configuration")

    params: Dict[str, ParamState] = {}
    for name in expected:
        shape = stored[name]["shape"]
        moments = adam[name]
        params[name] = ParamState(
            name=name,
            value=Tensor(stored[name]["data"], shape=shape),
            adam_m=Tensor(moments["m"], shape=shape),
            adam_v=Tensor(moments["v"], shape=shape),
            step=int(moments["step"]),
        )

    train = TrainConfig.model_validate(config["train"]) if config.get("train") is not None else None
    model = ModelParams(model_cfg, vocabulary, embeddings, params)
    return Checkpoint(model=model, train=train, completed_iterations=int(config.get("completed_iterations", 0)))


def read_checkpoint(path: Union[str, Path]) -> Checkpoint:
    """
    Load a checkpoint with its stored training state

    Raises:
        CheckpointError: Missing, truncated or inconsistent file
        CheckpointVersionError: Unsupported version
    """
    path = Path(path)
    if not path.exists():
        raise CheckpointError(f"checkpoint not found: {path}")
    try:
        document = orjson.loads(path.read_bytes())
    except orjson.JSONDecodeError as e:
        raise CheckpointError(f"{path}: not valid JSON ({e})") from e
    if not isinstance(document, dict):
        raise CheckpointError(f"{path}: checkpoint must be a JSON object")
    try:
        return _decode(document)
    except CheckpointError:
        raise
    except (KeyError, TypeError, ValueError, ValidationError, RetrofitPraeError) as e:
        raise CheckpointError(f"{path}: malformed checkpoint ({e})") from e


def load_checkpoint(path: Union[str, Path]) -> ModelParams:
    """Model parameters (with Adam state) stored at ``path``"""
    return read_checkpoint(path).model

