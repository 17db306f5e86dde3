"""
Description, speed and task success tests
"""

import numpy as np
import pytest

from retrofit_prae.evalkit.metrics import (
    TaskThresholds,
    description_success,
    speed_success,
    speed_threshold,
    task_success,
)
from retrofit_prae.simdata.actions import ActionSpec, Color, Hand, Motion, Speed


@pytest.fixture
def push_left_fast():
    return ActionSpec(Motion.PUSH, Hand.LEFT, Speed.FAST, (Color.RED, Color.GREEN))


def reach(length, joint, amount):
    """Linear motion of one joint from rest"""
    joints = np.zeros((length, 10))
    joints[:, joint] = np.linspace(0.0, amount, length)
    return joints


class TestDescriptionSuccess:
    """Group-level match of generated words"""

    def test_synonyms_accepted(self, push_left_fast, lexicon):
        assert description_success(["shove", "cardinal", "quickly", "EOS"], push_left_fast, lexicon)
        assert description_success(["BOS", "push", "red", "fast", "EOS"], push_left_fast, lexicon)

    def test_wrong_colour(self, push_left_fast, lexicon):
        assert not description_success(["push", "green", "fast", "EOS"], push_left_fast, lexicon)

    def test_order_matters(self, push_left_fast, lexicon):
        assert not description_success(["red", "push", "fast", "EOS"], push_left_fast, lexicon)

    def test_needs_eos(self, push_left_fast, lexicon):
        assert not description_success(["push", "red", "fast", "fast"], push_left_fast, lexicon)
        assert not description_success(["push", "red", "fast"], push_left_fast, lexicon)

    def test_right_hand_uses_right_cube(self, lexicon):
        spec = ActionSpec(Motion.PULL, Hand.RIGHT, Speed.SLOWLY, (Color.RED, Color.YELLOW))
        assert description_success(["drag", "amber", "gradually", "EOS"], spec, lexicon)


class TestSpeedSuccess:
    """Threshold on generated length"""

    def test_fast(self):
        assert speed_success(16, Speed.FAST, 16)
        assert not speed_success(17, Speed.FAST, 16)

    def test_slowly(self):
        assert speed_success(17, Speed.SLOWLY, 16)
        assert not speed_success(16, Speed.SLOWLY, 16)

    def test_desk_threshold_from_nominal_lengths(self):
        assert speed_threshold(20, 12) == 16


class TestTaskSuccess:
    """Arm, direction, displacement and speed"""

    thresholds = TaskThresholds(d_min=0.36, speed_threshold=16)

    def test_successful_push(self, push_left_fast):
        assert task_success(reach(12, 0, 0.5), push_left_fast, self.thresholds)

    def test_too_small_displacement(self, push_left_fast):
        assert not task_success(reach(12, 0, 0.3), push_left_fast, self.thresholds)

    def test_wrong_direction(self, push_left_fast):
        assert not task_success(reach(12, 0, -0.5), push_left_fast, self.thresholds)

    def test_wrong_arm(self, push_left_fast):
        assert not task_success(reach(12, 5, 0.5), push_left_fast, self.thresholds)

    def test_too_slow(self, push_left_fast):
        assert not task_success(reach(20, 0, 0.5), push_left_fast, self.thresholds)

    def test_empty_sequence(self, push_left_fast):
        assert not task_success(np.zeros((0, 10)), push_left_fast, self.thresholds)
