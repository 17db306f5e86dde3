"""
Training loop - alternating optimization of the autoencoders and the retrofit layer

Every iteration samples K paired items uniformly with replacement, computes
L_all = L_dsc + L_act + L_shr and applies Adam to exactly one parameter set.
The batch of iteration i depends only on (seed, i), so a run resumed from
a checkpoint continues exactly where the uninterrupted run would be.
"""

import csv
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from retrofit_prae.ndkernel.optim import AdamHyper, adam_step
from retrofit_prae.ndkernel.rng import RngStream
from retrofit_prae.ndkernel.tape import Tape, named_grads
from retrofit_prae.ndkernel.tensor import NonFiniteError
from retrofit_prae.rprae.losses import LossDomainError
from retrofit_prae.rprae.model import PairedBatch, forward_losses
from retrofit_prae.rprae.params import ModelParams, ParamGroup
from retrofit_prae.simdata.dataset import PairedSample
from retrofit_prae.trainer.config import TrainConfig
from retrofit_prae.trainer.schedule import update_target
from retrofit_prae.utils.errors import RetrofitPraeError

LOG_HEADER = ("iter", "target", "L_dsc", "L_act", "L_shr", "L_all")


class EmptyDatasetError(RetrofitPraeError):
    """Raised when there is nothing to train on"""

    pass


@dataclass
class TrainRecord:
    """Losses of one iteration and the set it updated"""

    iteration: int
    target: str
    L_dsc: float
    L_act: float
    L_shr: float
    L_all: float

    def to_dict(self) -> dict:
        return asdict(self)

    def is_finite(self) -> bool:
        return all(math.isfinite(v) for v in (self.L_dsc, self.L_act, self.L_shr, self.L_all))


class TrainingDivergedError(RetrofitPraeError):
    """Raised when a loss or an update becomes non-finite"""

    def __init__(self, message: str, record: Optional[TrainRecord] = None):
        self.record = record
        super().__init__(message)


@dataclass
class TrainLog:
    """Per-iteration training records"""

    records: List[TrainRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def append(self, record: TrainRecord) -> None:
        self.records.append(record)

    def totals(self) -> List[float]:
        return [r.L_all for r in self.records]

    def write_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(LOG_HEADER)
            for r in self.records:
                writer.writerow([r.iteration, r.target, repr(r.L_dsc), repr(r.L_act), repr(r.L_shr), repr(r.L_all)])
        return path

    @classmethod
    def read_csv(cls, path: Union[str, Path]) -> "TrainLog":
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.reader(f)
            header = next(reader, None)
            if tuple(header or ()) != LOG_HEADER:
                raise RetrofitPraeError(f"{path}: not a training log (header {header})")
            records = [
                TrainRecord(int(row[0]), row[1], float(row[2]), float(row[3]), float(row[4]), float(row[5]))
                for row in reader
                if row
            ]
        return cls(records)


CheckpointHook = Callable[[ModelParams, int, TrainLog], None]


def sample_batch(samples: Sequence[PairedSample], cfg: TrainConfig, iteration: int) -> List[PairedSample]:
    """The K items of iteration ``iteration``, drawn with replacement"""
    rng = RngStream(cfg.seed).child("batch", iteration).generator()
    picks = rng.integers(0, len(samples), size=cfg.batch_size)
    return [samples[int(j)] for j in picks]


def train(
    samples: Sequence[PairedSample],
    model: ModelParams,
    cfg: TrainConfig,
    start_iteration: int = 0,
    log: Optional[TrainLog] = None,
    on_checkpoint: Optional[CheckpointHook] = None,
) -> Tuple[ModelParams, TrainLog]:
    """
    Run iterations ``start_iteration`` .. N-1

    Args:
        samples: Training cell (training actions x trained descriptions)
        model: Parameters to start from
        cfg: Training configuration
        start_iteration: Completed iterations of a resumed run
        log: Log of a resumed run, appended to
        on_checkpoint: Called with (model, completed iterations, log) every
            ``cfg.checkpoint_every`` iterations

    Returns:
        (trained parameters, training log)

    Raises:
        EmptyDatasetError: No training samples
        TrainingDivergedError: A non-finite loss or parameter
    """
    log = log if log is not None else TrainLog()
    if not samples:
        raise EmptyDatasetError("training cell is empty")
    if not 0 <= start_iteration <= cfg.iterations:
        raise ValueError(f"start iteration {start_iteration} outside 0..{cfg.iterations}")
    if cfg.iterations == start_iteration:
        return model, log

    hyper = AdamHyper(lr=cfg.lr, beta1=cfg.beta1, beta2=cfg.beta2, eps=cfg.eps)
    logger.info(
        f"Training started (iterations={start_iteration}..{cfg.iterations}, K={cfg.batch_size}, "
        f"samples={len(samples)}, retrofit={model.config.use_retrofit})"
    )

    for i in range(start_iteration, cfg.iterations):
        target = update_target(i, cfg.n_ini, cfg.n_ch)
        batch = PairedBatch.from_samples(sample_batch(samples, cfg, i), model)
        tape = Tape()
        try:
            losses = forward_losses(model, batch, tape, cfg.margin)
        except (NonFiniteError, LossDomainError) as e:
            raise TrainingDivergedError(f"iteration {i}: {e}") from e

        record = TrainRecord(iteration=i, target=target.value, **losses.values())
        if not record.is_finite():
            logger.error(f"Non-finite loss at iteration {i}: {record.to_dict()}")
            raise TrainingDivergedError(f"non-finite loss at iteration {i}", record)

        names = model.group_names(target)
        if names:
            grads = named_grads(tape, losses.total)
            try:
                model = model.with_updates(adam_step(model.group(target), grads, hyper))
            except NonFiniteError as e:
                raise TrainingDivergedError(f"iteration {i}: non-finite update ({e})", record) from e

        log.append(record)
        logger.debug(f"iter {i} {target.value} L_all={record.L_all:.6f}")
        completed = i + 1
        if completed % cfg.log_every == 0:
            window = log.totals()[-cfg.log_every :]
            logger.info(f"Iteration {completed}/{cfg.iterations}: mean L_all={float(np.mean(window)):.5f}")
        if on_checkpoint is not None and cfg.checkpoint_every and completed % cfg.checkpoint_every == 0:
            on_checkpoint(model, completed, log)

    logger.info(f"Training finished (final L_all={log.records[-1].L_all:.5f})")
    return model, log


def param_changes(before: ModelParams, after: ModelParams, group: ParamGroup) -> List[str]:
    """Names in ``group`` whose values differ between two parameter sets"""
    return [
        name
        for name in before.group_names(group)
        if not before.params[name].value.bitwise_equal(after.params[name].value)
    ]
