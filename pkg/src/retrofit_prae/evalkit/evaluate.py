"""
Evaluation - action-to-description and description-to-action experiments

Results are aggregated per action split ("train", "test" and "all") and,
for description-to-action, additionally by number of unseen words, by which
slots are unseen and by each individual unseen word.
"""

from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np
import orjson
from loguru import logger
from pydantic import BaseModel, Field

from retrofit_prae.embeddings.lexicon import MERGED_SYMBOL, SynonymLexicon
from retrofit_prae.evalkit.dtw import dtw
from retrofit_prae.evalkit.metrics import (
    TaskThresholds,
    description_success,
    speed_success,
    speed_threshold,
    task_success,
)
from retrofit_prae.rprae.model import RetrofitPRAE
from retrofit_prae.rprae.params import ModelParams
from retrofit_prae.simdata.dataset import Fold, PairedSample
from retrofit_prae.simdata.describe import unseen_key, unseen_slots
from retrofit_prae.utils.errors import RetrofitPraeError

COUNT_KEYS = ("0", "1", "2", "3")
POS_KEYS = ("-", "verb", "adj", "adv", "verb+adj", "adj+adv", "adv+verb", "verb+adj+adv")
SPLITS = ("train", "test", "all")

ReportKey = Tuple[str, str, str, str]
T = TypeVar("T")
R = TypeVar("R")


class ConfigCompatibilityError(RetrofitPraeError):
    """Raised when a model and a dataset or config do not belong together"""

    pass


class EvalMode(str, Enum):
    ACT2DSC = "act2dsc"
    DSC2ACT = "dsc2act"


class EvalConfig(BaseModel):
    """Metric thresholds and evaluation batching"""

    speed_threshold: int = Field(16, ge=1, description="Frames separating FAST from SLOWLY")
    d_min: float = Field(0.36, gt=0.0, description="Required displacement, 0.6 x amplitude")
    normalize_dtw: bool = False
    batch_size: int = Field(64, ge=1)
    threads: int = Field(1, ge=1)

    @classmethod
    def for_scale(cls, scale: str, t_slow: Optional[int] = None, t_fast: Optional[int] = None) -> "EvalConfig":
        if scale == "full":
            return cls(speed_threshold=30)
        if t_slow is not None and t_fast is not None:
            return cls(speed_threshold=speed_threshold(t_slow, t_fast))
        return cls()


@dataclass(frozen=True)
class Aggregate:
    """Mean, population standard deviation and count"""

    mean: float
    std: float
    n: int

    @classmethod
    def of(cls, values: Sequence[float]) -> "Aggregate":
        arr = np.asarray(values, dtype=np.float64)
        return cls(float(arr.mean()), float(arr.std()), int(arr.size))

    def to_dict(self) -> dict:
        return {"mean": self.mean, "std": self.std, "n": self.n}


@dataclass
class EvalReport:
    """
    Aggregates keyed by (split, breakdown, group, metric)

    breakdown is "all", "count" (unseen-word count), "pos" (which slots are
    unseen) or "word" (one unseen word); group is the value within it.
    """

    mode: EvalMode
    test_set: int
    entries: Dict[ReportKey, Aggregate] = field(default_factory=dict)
    items: List[dict] = field(default_factory=list)

    def get(self, split: str, breakdown: str, group: str, metric: str) -> Optional[Aggregate]:
        return self.entries.get((split, breakdown, group, metric))

    def metrics(self) -> List[str]:
        return sorted({key[3] for key in self.entries})

    def groups(self, breakdown: str) -> List[str]:
        found = {key[2] for key in self.entries if key[1] == breakdown}
        order = {"count": COUNT_KEYS, "pos": POS_KEYS}.get(breakdown)
        if order is None:
            return sorted(found)
        return [g for g in order if g in found]

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "test_set": self.test_set,
            "aggregates": [
                {"split": s, "breakdown": b, "group": g, "metric": m, **agg.to_dict()}
                for (s, b, g, m), agg in sorted(self.entries.items())
            ],
            "items": self.items,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EvalReport":
        entries = {
            (row["split"], row["breakdown"], row["group"], row["metric"]): Aggregate(
                float(row["mean"]), float(row["std"]), int(row["n"])
            )
            for row in data["aggregates"]
        }
        return cls(EvalMode(data["mode"]), int(data["test_set"]), entries, list(data.get("items", [])))

    def write_json(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(orjson.dumps(self.to_dict(), option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2))
        return path

    @classmethod
    def read_json(cls, path: Union[str, Path]) -> "EvalReport":
        return cls.from_dict(orjson.loads(Path(path).read_bytes()))


class _Collector:
    """Gathers per-item values under several report keys"""

    def __init__(self) -> None:
        self.values: Dict[ReportKey, List[float]] = OrderedDict()

    def add(self, splits: Iterable[str], breakdown: str, group: str, metric: str, value: float) -> None:
        for split in splits:
            self.values.setdefault((split, breakdown, group, metric), []).append(value)

    def aggregates(self) -> Dict[ReportKey, Aggregate]:
        return {key: Aggregate.of(values) for key, values in self.values.items()}


def _batched(items: Sequence[T], size: int) -> List[Sequence[T]]:
    return [items[i : i + size] for i in range(0, len(items), size)]


def _map_batches(fn: Callable[[Sequence[T]], List[R]], items: Sequence[T], cfg: EvalConfig) -> List[R]:
    batches = _batched(items, cfg.batch_size)
    if cfg.threads > 1 and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(fn, batches))
    else:
        results = [fn(batch) for batch in batches]
    return [r for batch in results for r in batch]


def check_compatibility(params: ModelParams, samples: Sequence[PairedSample]) -> None:
    """Raise ConfigCompatibilityError unless the model can read every sample"""
    vocab = set(params.vocabulary)
    unknown = sorted({t for s in samples for t in s.description.tokens if t not in vocab})
    if unknown:
        raise ConfigCompatibilityError(f"dataset tokens missing from the model vocabulary: {', '.join(unknown)}")
    cfg = params.config
    for s in samples[:1]:
        if s.sequence.joints.shape[1] != cfg.joint_dim or s.sequence.visual.shape[0] != cfg.visual_dim:
            raise ConfigCompatibilityError(
                f"dataset frames ({s.sequence.joints.shape[1]} joints, {s.sequence.visual.shape[0]} visual) "
                f"do not match the model ({cfg.joint_dim}, {cfg.visual_dim})"
            )


def _evaluate_act2dsc(
    model: RetrofitPRAE, samples: Sequence[PairedSample], lexicon: SynonymLexicon, cfg: EvalConfig
) -> Tuple[_Collector, List[dict]]:
    unique: "OrderedDict[Tuple[str, int], PairedSample]" = OrderedDict()
    for s in samples:
        unique.setdefault((s.spec.key, s.repetition), s)
    chosen = list(unique.values())
    generated = _map_batches(lambda batch: model.describe_actions([s.sequence for s in batch]), chosen, cfg)

    collector = _Collector()
    items = []
    for sample, tokens in zip(chosen, generated):
        ok = description_success(tokens, sample.spec, lexicon)
        collector.add((sample.cell.action_split, "all"), "all", "all", "description_success", 100.0 * ok)
        items.append({"action": sample.spec.key, "repetition": sample.repetition, "generated": tokens, "success": ok})
    return collector, items


def _evaluate_dsc2act(
    model: RetrofitPRAE, samples: Sequence[PairedSample], test_set: int, lexicon: SynonymLexicon, cfg: EvalConfig
) -> Tuple[_Collector, List[dict]]:
    def run(batch: Sequence[PairedSample]) -> List[np.ndarray]:
        initial = np.stack([s.sequence.joints[0] for s in batch])
        visual = np.stack([s.sequence.visual for s in batch])
        return model.act_from_descriptions([s.description for s in batch], initial, visual)

    generated = _map_batches(run, list(samples), cfg)
    thresholds = TaskThresholds(d_min=cfg.d_min, speed_threshold=cfg.speed_threshold)

    collector = _Collector()
    items = []
    for sample, joints in zip(samples, generated):
        values = {
            "dtw": dtw(joints, sample.sequence.joints, normalize=cfg.normalize_dtw),
            "speed_success": 100.0 * speed_success(len(joints), sample.spec.speed, cfg.speed_threshold),
            "task_success": 100.0 * task_success(joints, sample.spec, thresholds),
        }
        slots = unseen_slots(sample.word_sets, test_set)
        unseen_words = [w for w, k in zip(sample.description.words, sample.word_sets) if k == test_set]
        splits = (sample.cell.action_split, "all")
        for metric, value in values.items():
            collector.add(splits, "all", "all", metric, value)
            collector.add(splits, "count", str(len(slots)), metric, value)
            collector.add(splits, "pos", unseen_key(sample.word_sets, test_set), metric, value)
            for word in unseen_words:
                collector.add(splits, "word", word, metric, value)
        items.append({"id": sample.id, "length": len(joints), **values})
    return collector, items


def evaluate(
    model: Union[ModelParams, RetrofitPRAE],
    samples: Sequence[PairedSample],
    fold: Union[Fold, int],
    mode: Union[EvalMode, str],
    cfg: Optional[EvalConfig] = None,
    lexicon: Optional[SynonymLexicon] = None,
) -> EvalReport:
    """
    Run one experiment over every given sample

    Args:
        model: Trained parameters or an inference facade
        samples: Samples of any cells
        fold: Fold (or its test word set) that defines unseen words
        mode: act2dsc or dsc2act
        cfg: Thresholds and batching
        lexicon: Synonym lexicon for description checks

    Returns:
        EvalReport with per-item details
    """
    facade = model if isinstance(model, RetrofitPRAE) else RetrofitPRAE(model)
    cfg = cfg or EvalConfig()
    lexicon = lexicon or SynonymLexicon(merge_symbols=MERGED_SYMBOL in facade.params.vocabulary)
    mode = EvalMode(mode)
    test_set = fold.test_set if isinstance(fold, Fold) else int(fold)
    if not samples:
        raise ConfigCompatibilityError("nothing to evaluate: no samples given")
    check_compatibility(facade.params, samples)

    if mode == EvalMode.ACT2DSC:
        collector, items = _evaluate_act2dsc(facade, samples, lexicon, cfg)
    else:
        collector, items = _evaluate_dsc2act(facade, samples, test_set, lexicon, cfg)

    report = EvalReport(mode, test_set, collector.aggregates(), items)
    for key in sorted(k for k in report.entries if k[1] == "all"):
        agg = report.entries[key]
        logger.info(f"{mode.value} {key[0]} {key[3]}: {agg.mean:.3f} +/- {agg.std:.3f} (n={agg.n})")
    return report
