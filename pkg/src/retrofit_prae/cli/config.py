"""
Run configuration - presets, config files and flag overrides

Merge order is preset < config file (JSON or YAML) < command-line flags.
The merged RunConfig is snapshotted as config.json in the run directory
and is enough to replay the run.
"""

from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import orjson
import yaml
from pydantic import BaseModel, Field, model_validator

from retrofit_prae.embeddings.synth import SynthConfig
from retrofit_prae.evalkit.evaluate import EvalConfig
from retrofit_prae.simdata.dataset import DataConfig
from retrofit_prae.trainer.config import TrainConfig
from retrofit_prae.utils.config import get_settings
from retrofit_prae.utils.errors import RetrofitPraeError

SCALES = ("desk", "full")


class ConfigFileError(RetrofitPraeError):
    """Raised for an unreadable config file"""

    pass


class EmbeddingConfig(BaseModel):
    """Where the pre-trained embeddings come from"""

    source: str = Field("synthetic", description='"synthetic" or a word2vec text file path')
    dim: int = Field(16, ge=8, description="Dimension of synthetic embeddings")
    synth: SynthConfig = Field(default_factory=SynthConfig)
    merge_symbols: bool = Field(False, description="One BOS_EOS token instead of BOS and EOS")


class RunConfig(BaseModel):
    """Everything one run depends on"""

    scale: str = "desk"
    seed: int = Field(0, ge=0, lt=2**64)
    fold: int = Field(1, ge=1, le=5)
    out: Optional[str] = None
    threads: int = Field(default_factory=lambda: get_settings().threads, ge=1)
    data: DataConfig = Field(default_factory=DataConfig)
    embeddings: EmbeddingConfig = Field(default_factory=EmbeddingConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    eval: EvalConfig = Field(default_factory=EvalConfig)

    @model_validator(mode="after")
    def _sync(self) -> "RunConfig":
        if self.scale not in SCALES:
            raise ValueError(f"scale must be one of {SCALES}, got '{self.scale}'")
        # one root seed drives data, embeddings, initialization and batches
        self.train.seed = self.seed
        if self.embeddings.source == "synthetic":
            self.train.model.embed_dim = self.embeddings.dim
        self.eval.threads = self.threads
        return self

    def out_dir(self) -> Path:
        if self.out:
            return Path(self.out)
        return Path(get_settings().output_dir) / f"{self.scale}-fold{self.fold}-seed{self.seed}"

    def snapshot(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


def preset(scale: str) -> Dict[str, Any]:
    """Default configuration of a scale as a plain dict"""
    if scale not in SCALES:
        raise ConfigFileError(f"unknown scale '{scale}' (expected one of {', '.join(SCALES)})")
    data = DataConfig.for_scale(scale)
    train = TrainConfig.for_scale(scale)
    evaluation = EvalConfig.for_scale(scale, data.trajectory.t_slow, data.trajectory.t_fast)
    embeddings = EmbeddingConfig(dim=train.model.embed_dim)
    return {
        "scale": scale,
        "data": data.model_dump(mode="json"),
        "embeddings": embeddings.model_dump(mode="json"),
        "train": train.model_dump(mode="json"),
        "eval": evaluation.model_dump(mode="json"),
    }


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a JSON or YAML (by extension) config file into a dict"""
    path = Path(path)
    if not path.exists():
        raise ConfigFileError(f"config file not found: {path}")
    try:
        if path.suffix.lower() in (".yaml", ".yml"):
            data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        else:
            data = orjson.loads(path.read_bytes())
    except (yaml.YAMLError, orjson.JSONDecodeError) as e:
        raise ConfigFileError(f"{path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigFileError(f"{path}: top level must be a mapping")
    return data


def deep_merge(base: Mapping[str, Any], override: Mapping[str, Any]) -> Dict[str, Any]:
    """Recursive dict merge; values of ``override`` win"""
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def build_run_config(
    scale: Optional[str] = None,
    config_path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """
    Merge preset, config file and flag overrides

    Args:
        scale: Preset name; falls back to the file's "scale", then "desk"
        config_path: Optional JSON or YAML file
        overrides: Nested dict of flag values (None values are ignored)

    Returns:
        Validated RunConfig
    """
    file_data = load_config_file(config_path) if config_path else {}
    chosen = scale or file_data.get("scale") or "desk"
    merged = deep_merge(preset(chosen), file_data)
    merged["scale"] = chosen
    if overrides:
        merged = deep_merge(merged, _drop_none(overrides))
    return RunConfig.model_validate(merged)


def _drop_none(values: Mapping[str, Any]) -> Dict[str, Any]:
    cleaned: Dict[str, Any] = {}
    for key, value in values.items():
        if isinstance(value, Mapping):
            nested = _drop_none(value)
            if nested:
                cleaned[key] = nested
        elif value is not None:
            cleaned[key] = value
    return cleaned
