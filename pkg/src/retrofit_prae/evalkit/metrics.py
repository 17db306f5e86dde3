"""
Success metrics for generated descriptions and actions

- description_success: verb, adjective, adverb, EOS from the right groups
- speed_success: generated length on the right side of a threshold
- task_success: a simulator-space proxy for "moved the right cube the
  right way at the right speed"
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from retrofit_prae.embeddings.lexicon import SLOT_ORDER, SynonymLexicon
from retrofit_prae.simdata.actions import ActionSpec, Hand, Speed
from retrofit_prae.simdata.describe import spec_groups
from retrofit_prae.simdata.trajectory import ARM_JOINTS, arm_offset, designated_joint

FULL_SCALE_SPEED_THRESHOLD = 30


def speed_threshold(t_slow: int, t_fast: int) -> int:
    """Midpoint threshold between the nominal slow and fast lengths"""
    return (t_slow + t_fast) // 2


def description_success(tokens: Sequence[str], spec: ActionSpec, lexicon: Optional[SynonymLexicon] = None) -> bool:
    """
    True iff ``tokens`` is exactly verb, adjective, adverb, EOS with every
    word from the group the action calls for

    A leading BOS is ignored.
    """
    lexicon = lexicon or SynonymLexicon()
    tokens = list(tokens)
    if tokens and tokens[0] == lexicon.bos and len(tokens) == 5:
        tokens = tokens[1:]
    if len(tokens) != 4 or tokens[3] != lexicon.eos:
        return False
    for word, pos, label in zip(tokens[:3], SLOT_ORDER, spec_groups(spec)):
        group = lexicon.group_of(word)
        if group is None or group.pos != pos or group.label != label:
            return False
    return True


def speed_success(length: int, speed: Speed, threshold: int = FULL_SCALE_SPEED_THRESHOLD) -> bool:
    """FAST needs length <= threshold, SLOWLY needs length > threshold"""
    if Speed(speed) == Speed.FAST:
        return length <= threshold
    return length > threshold


@dataclass(frozen=True)
class TaskThresholds:
    """Criteria of the task-success proxy"""

    d_min: float = 0.36
    speed_threshold: int = FULL_SCALE_SPEED_THRESHOLD


def arm_displacement(joints: np.ndarray, hand: Hand) -> float:
    """Norm of the net (last minus first frame) displacement of one arm"""
    offset = arm_offset(hand)
    delta = joints[-1, offset : offset + ARM_JOINTS] - joints[0, offset : offset + ARM_JOINTS]
    return float(np.linalg.norm(delta))


def task_success(joints: np.ndarray, spec: ActionSpec, thresholds: TaskThresholds = TaskThresholds()) -> bool:
    """
    True iff the acting arm moved more than the other arm, the designated
    joint moved at least ``d_min`` in the motion's direction, and the length
    passes speed_success
    """
    joints = np.asarray(joints, dtype=np.float64)
    if joints.ndim != 2 or joints.shape[0] == 0:
        return False
    other = Hand.RIGHT if spec.hand == Hand.LEFT else Hand.LEFT
    if arm_displacement(joints, spec.hand) <= arm_displacement(joints, other):
        return False
    index, sign = designated_joint(spec)
    if sign * (joints[-1, index] - joints[0, index]) < thresholds.d_min:
        return False
    return speed_success(joints.shape[0], spec.speed, thresholds.speed_threshold)
