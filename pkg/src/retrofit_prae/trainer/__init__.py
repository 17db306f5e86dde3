"""Alternating training of the autoencoders and the retrofit layer"""

from retrofit_prae.trainer.checkpoint import (
    Checkpoint,
    CheckpointError,
    CheckpointVersionError,
    load_checkpoint,
    read_checkpoint,
    save_checkpoint,
)
from retrofit_prae.trainer.config import TrainConfig, ablate_prae
from retrofit_prae.trainer.loop import (
    EmptyDatasetError,
    TrainingDivergedError,
    TrainLog,
    TrainRecord,
    param_changes,
    sample_batch,
    train,
)
from retrofit_prae.trainer.schedule import UpdateTarget, count_targets, update_target

__all__ = [
    "Checkpoint",
    "CheckpointError",
    "CheckpointVersionError",
    "load_checkpoint",
    "read_checkpoint",
    "save_checkpoint",
    "TrainConfig",
    "ablate_prae",
    "EmptyDatasetError",
    "TrainingDivergedError",
    "TrainLog",
    "TrainRecord",
    "param_changes",
    "sample_batch",
    "train",
    "UpdateTarget",
    "count_targets",
    "update_target",
]
