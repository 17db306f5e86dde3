"""Synthetic cube-manipulation task: actions, trajectories, descriptions, data division"""

from retrofit_prae.simdata.actions import (
    ACTIONS_PER_ARRANGEMENT,
    ActionSpec,
    Color,
    Hand,
    Motion,
    Speed,
    enumerate_action_specs,
    enumerate_arrangements,
)
from retrofit_prae.simdata.dataset import (
    Cell,
    DataConfig,
    DatasetError,
    DatasetSplit,
    Fold,
    PairedDataset,
    PairedSample,
    PatternKey,
    build_dataset,
    make_folds,
)
from retrofit_prae.simdata.describe import Description, describe, describe_with, unseen_key, unseen_slots
from retrofit_prae.simdata.store import group_by_cell, read_samples_jsonl, write_samples_jsonl
from retrofit_prae.simdata.trajectory import ActionSequence, TrajectoryConfig, synth_trajectory
from retrofit_prae.simdata.visual import visual_features

__all__ = [
    "ACTIONS_PER_ARRANGEMENT",
    "ActionSpec",
    "Color",
    "Hand",
    "Motion",
    "Speed",
    "enumerate_action_specs",
    "enumerate_arrangements",
    "Cell",
    "DataConfig",
    "DatasetError",
    "DatasetSplit",
    "Fold",
    "PairedDataset",
    "PairedSample",
    "PatternKey",
    "build_dataset",
    "make_folds",
    "Description",
    "describe",
    "describe_with",
    "unseen_key",
    "unseen_slots",
    "group_by_cell",
    "read_samples_jsonl",
    "write_samples_jsonl",
    "ActionSequence",
    "TrajectoryConfig",
    "synth_trajectory",
    "visual_features",
]
