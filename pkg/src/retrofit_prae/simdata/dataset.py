"""
Dataset - five-fold word-set division and the paired action/description data

Actions are split into training and test actions; descriptions are expanded
over the word sets of a fold. A description is "trained" when every slot
uses a training word set and "unseen" when at least one slot uses the test
word set. Crossing the two splits gives the four cells of the data division.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Dict, Iterator, List, Optional, Tuple

from loguru import logger
from pydantic import BaseModel, Field, model_validator

from retrofit_prae.embeddings.lexicon import N_WORD_SETS, SynonymLexicon
from retrofit_prae.ndkernel.rng import RngStream
from retrofit_prae.simdata.actions import ActionSpec, enumerate_action_specs
from retrofit_prae.simdata.describe import Description, WordSets, describe_with
from retrofit_prae.simdata.trajectory import ActionSequence, TrajectoryConfig, synth_trajectory
from retrofit_prae.simdata.visual import NUISANCE_STD, visual_features
from retrofit_prae.utils.errors import RetrofitPraeError


class DatasetError(RetrofitPraeError):
    """Raised for an invalid fold, an unreadable dataset file or an empty cell"""

    pass


class Cell(str, Enum):
    """Action split x description split"""

    TRAIN_TRAINED = "train_trained"
    TRAIN_UNSEEN = "train_unseen"
    TEST_TRAINED = "test_trained"
    TEST_UNSEEN = "test_unseen"

    @property
    def action_split(self) -> str:
        return self.value.split("_")[0]

    @property
    def description_split(self) -> str:
        return self.value.split("_")[1]

    @classmethod
    def of(cls, test_action: bool, unseen: bool) -> "Cell":
        return cls(f"{'test' if test_action else 'train'}_{'unseen' if unseen else 'trained'}")


@dataclass(frozen=True)
class Fold:
    """One cross-validation fold over word sets"""

    index: int
    train_sets: Tuple[int, ...]
    test_set: int


def make_folds(lexicon: Optional[SynonymLexicon] = None) -> List[Fold]:
    """Fold i tests on word set i and trains on the other four"""
    n_sets = len(lexicon.groups[0].members) if lexicon is not None else N_WORD_SETS
    sets = range(1, n_sets + 1)
    return [Fold(i, tuple(k for k in sets if k != i), i) for i in sets]


class DataConfig(BaseModel):
    """How much data to generate and what it looks like"""

    scale: str = Field("desk", description="Preset the config was derived from")
    trajectory: TrajectoryConfig = Field(default_factory=TrajectoryConfig)
    repetitions: int = Field(1, ge=1, le=6)
    n_train_word_sets: int = Field(2, ge=1, le=4, description="Training word sets used from the fold")
    n_test_actions: int = Field(18, ge=1, le=71)
    visual_noise: float = Field(NUISANCE_STD, ge=0.0)

    @model_validator(mode="after")
    def _check_scale(self) -> "DataConfig":
        if self.scale not in ("desk", "full", "custom"):
            raise ValueError(f"unknown scale '{self.scale}'")
        return self

    @classmethod
    def for_scale(cls, scale: str) -> "DataConfig":
        if scale == "full":
            return cls(
                scale="full",
                trajectory=TrajectoryConfig(t_slow=39, t_fast=26),
                repetitions=6,
                n_train_word_sets=4,
            )
        if scale == "desk":
            return cls()
        raise DatasetError(f"unknown scale '{scale}' (expected desk or full)")


@dataclass(frozen=True)
class PatternKey:
    """One (action, word-set triple) sequence pattern"""

    action_index: int
    word_sets: WordSets


@dataclass(frozen=True, eq=False)
class PairedSample:
    """An action sequence paired with one of its descriptions"""

    id: str
    spec: ActionSpec
    sequence: ActionSequence
    description: Description
    word_sets: WordSets
    repetition: int
    cell: Cell


def sample_id(action_index: int, repetition: int, word_sets: WordSets) -> str:
    v, a, d = word_sets
    return f"a{action_index:02d}-r{repetition}-v{v}a{a}d{d}"


@dataclass(frozen=True)
class DatasetSplit:
    """Sequence patterns per cell"""

    fold: Fold
    train_actions: Tuple[int, ...]
    test_actions: Tuple[int, ...]
    train_word_sets: Tuple[int, ...]
    cells: Dict[Cell, Tuple[PatternKey, ...]]

    def pattern_counts(self) -> Dict[str, int]:
        return {cell.value: len(self.cells[cell]) for cell in Cell}


def partition_actions(n_actions: int, n_test: int, seed: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Seeded split of action indices into (train, test), each sorted"""
    if not 0 < n_test < n_actions:
        raise DatasetError(f"cannot hold out {n_test} of {n_actions} actions")
    order = RngStream(seed).child("split").generator().permutation(n_actions)
    test = tuple(sorted(int(i) for i in order[:n_test]))
    train = tuple(sorted(int(i) for i in order[n_test:]))
    return train, test


def build_split(n_actions: int, cfg: DataConfig, fold: Fold, seed: int) -> DatasetSplit:
    train_actions, test_actions = partition_actions(n_actions, cfg.n_test_actions, seed)
    train_sets = fold.train_sets[: cfg.n_train_word_sets]
    allowed = sorted(train_sets + (fold.test_set,))
    triples = list(product(allowed, repeat=3))

    cells: Dict[Cell, List[PatternKey]] = {cell: [] for cell in Cell}
    test_lookup = set(test_actions)
    for action_index in range(n_actions):
        for triple in triples:
            unseen = fold.test_set in triple
            cells[Cell.of(action_index in test_lookup, unseen)].append(PatternKey(action_index, triple))
    return DatasetSplit(
        fold=fold,
        train_actions=train_actions,
        test_actions=test_actions,
        train_word_sets=tuple(train_sets),
        cells={cell: tuple(keys) for cell, keys in cells.items()},
    )


class PairedDataset:
    """
    Generated sequences plus lazy pairing with descriptions

    Each (action, repetition) trajectory is synthesized once; samples are
    materialized per cell on demand.
    """

    def __init__(
        self,
        cfg: DataConfig,
        seed: int,
        split: DatasetSplit,
        specs: List[ActionSpec],
        sequences: Dict[Tuple[int, int], ActionSequence],
        lexicon: SynonymLexicon,
    ):
        self.cfg = cfg
        self.seed = seed
        self.split = split
        self.specs = specs
        self.sequences = sequences
        self.lexicon = lexicon

    @property
    def fold(self) -> Fold:
        return self.split.fold

    def sequence(self, action_index: int, repetition: int) -> ActionSequence:
        return self.sequences[(action_index, repetition)]

    def samples(self, cell: Cell) -> Iterator[PairedSample]:
        for key in self.split.cells[cell]:
            spec = self.specs[key.action_index]
            description = describe_with(spec, key.word_sets, self.lexicon)
            for rep in range(1, self.cfg.repetitions + 1):
                yield PairedSample(
                    id=sample_id(key.action_index, rep, key.word_sets),
                    spec=spec,
                    sequence=self.sequences[(key.action_index, rep)],
                    description=description,
                    word_sets=key.word_sets,
                    repetition=rep,
                    cell=cell,
                )

    def all_samples(self) -> Iterator[PairedSample]:
        for cell in Cell:
            yield from self.samples(cell)

    def training_samples(self) -> List[PairedSample]:
        """The only cell training ever sees"""
        return list(self.samples(Cell.TRAIN_TRAINED))

    def sequence_counts(self) -> Dict[str, int]:
        return {cell.value: len(self.split.cells[cell]) * self.cfg.repetitions for cell in Cell}

    def manifest(self) -> dict:
        """Counts and split membership in a JSON-ready dict"""
        return {
            "scale": self.cfg.scale,
            "seed": self.seed,
            "fold": self.fold.index,
            "test_word_set": self.fold.test_set,
            "train_word_sets": list(self.split.train_word_sets),
            "train_actions": list(self.split.train_actions),
            "test_actions": list(self.split.test_actions),
            "repetitions": self.cfg.repetitions,
            "pattern_counts": self.split.pattern_counts(),
            "sequence_counts": self.sequence_counts(),
        }


def build_dataset(
    cfg: DataConfig,
    fold: int,
    seed: int,
    lexicon: Optional[SynonymLexicon] = None,
    threads: int = 1,
) -> Tuple[PairedDataset, DatasetSplit]:
    """
    Generate every trajectory and the cell division for one fold

    Args:
        cfg: Data configuration (scale preset)
        fold: Fold index 1-5
        seed: Root seed
        lexicon: Synonym lexicon
        threads: Worker threads for trajectory synthesis

    Returns:
        (dataset, split)
    """
    lexicon = lexicon or SynonymLexicon()
    folds = make_folds(lexicon)
    if not 1 <= fold <= len(folds):
        raise DatasetError(f"fold must be in 1..{len(folds)}, got {fold}")

    specs = enumerate_action_specs()
    split = build_split(len(specs), cfg, folds[fold - 1], seed)
    keys = [(a, rep) for a in range(len(specs)) for rep in range(1, cfg.repetitions + 1)]
    root = RngStream(seed)

    def _generate(key: Tuple[int, int]) -> ActionSequence:
        action_index, rep = key
        spec = specs[action_index]
        visual = visual_features(
            spec.arrangement, root.child("visual", spec.key, rep).integer_seed(), cfg.visual_noise
        )
        return synth_trajectory(spec, cfg.trajectory, seed, rep, visual)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            generated = list(pool.map(_generate, keys))
    else:
        generated = [_generate(key) for key in keys]

    dataset = PairedDataset(cfg, seed, split, specs, dict(zip(keys, generated)), lexicon)
    logger.info(
        f"Dataset built (scale={cfg.scale}, fold={fold}, seed={seed}, "
        f"sequences={len(generated)}, patterns={split.pattern_counts()})"
    )
    return dataset, split
