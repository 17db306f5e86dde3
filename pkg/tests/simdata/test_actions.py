"""
Action specs, trajectories, visual features and descriptions
"""

import numpy as np
import pytest

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
from retrofit_prae.simdata.describe import Description, describe, describe_with, unseen_key, unseen_slots
from retrofit_prae.simdata.trajectory import (
    JOINT_LIMIT,
    TrajectoryConfig,
    designated_joint,
    min_jerk,
    synth_trajectory,
)
from retrofit_prae.simdata.visual import visual_features

RED_RIGHT = (Color.GREEN, Color.RED)
VISUAL = np.zeros(10)


class TestActionSpecs:
    """Enumeration of the action patterns"""

    def test_counts(self):
        specs = enumerate_action_specs()
        assert len(enumerate_arrangements()) == 6
        assert len(specs) == 72
        assert len({s.key for s in specs}) == 72
        assert all(sum(1 for s in specs if s.arrangement == arr) == ACTIONS_PER_ARRANGEMENT for arr in enumerate_arrangements())

    def test_acting_color_follows_hand(self):
        spec = ActionSpec(Motion.PUSH, Hand.RIGHT, Speed.SLOWLY, RED_RIGHT)
        assert spec.acting_color == Color.RED
        assert spec.with_hand(Hand.LEFT).acting_color == Color.GREEN
        assert spec.name == "PUSH-RIGHT-SLOWLY"

    def test_dict_round_trip(self):
        spec = ActionSpec(Motion.SLIDE, Hand.LEFT, Speed.FAST, (Color.YELLOW, Color.RED))
        assert ActionSpec.from_dict(spec.to_dict()) == spec

    def test_same_colour_cubes_rejected(self):
        with pytest.raises(ValueError):
            ActionSpec(Motion.PUSH, Hand.LEFT, Speed.FAST, (Color.RED, Color.RED))


class TestSynthTrajectory:
    """Minimum-jerk joint trajectories"""

    @pytest.fixture
    def still(self):
        return TrajectoryConfig(noise=0.0, jitter=0)

    def test_min_jerk_endpoints(self):
        assert min_jerk(np.array([0.0, 0.5, 1.0])).tolist() == [0.0, 0.5, 1.0]

    def test_zero_noise_repetitions_identical(self):
        cfg = TrajectoryConfig(noise=0.0)
        assert cfg.jitter == 1
        for spec in enumerate_action_specs():
            a = synth_trajectory(spec, cfg, seed=0, repetition=1, visual=VISUAL)
            b = synth_trajectory(spec, cfg, seed=0, repetition=2, visual=VISUAL)
            assert a.bitwise_equal(b), spec.key

    def test_jitter_varies_lengths_across_actions(self):
        cfg = TrajectoryConfig(noise=0.0)
        fast = [s for s in enumerate_action_specs() if s.speed == Speed.FAST]
        lengths = {synth_trajectory(s, cfg, 0, 1, VISUAL).length for s in fast}
        assert lengths <= {11, 12, 13}
        assert len(lengths) > 1

    def test_noise_separates_repetitions(self):
        spec = ActionSpec(Motion.PULL, Hand.LEFT, Speed.FAST, RED_RIGHT)
        a = synth_trajectory(spec, TrajectoryConfig(), 0, 1, VISUAL)
        b = synth_trajectory(spec, TrajectoryConfig(), 0, 2, VISUAL)
        assert a.length == b.length
        assert not a.bitwise_equal(b)

    def test_push_and_pull_are_mirror_images(self, still):
        push = synth_trajectory(ActionSpec(Motion.PUSH, Hand.RIGHT, Speed.SLOWLY, RED_RIGHT), still, 0, 1, VISUAL)
        pull = synth_trajectory(ActionSpec(Motion.PULL, Hand.RIGHT, Speed.SLOWLY, RED_RIGHT), still, 0, 1, VISUAL)
        index, _ = designated_joint(ActionSpec(Motion.PUSH, Hand.RIGHT, Speed.SLOWLY, RED_RIGHT))
        d_push = push.joints[-1, index] - push.joints[0, index]
        d_pull = pull.joints[-1, index] - pull.joints[0, index]
        assert d_push == pytest.approx(0.6, abs=1e-12)
        assert d_pull == pytest.approx(-0.6, abs=1e-12)

    def test_slide_moves_lateral_dimension_inward(self, still):
        left = synth_trajectory(ActionSpec(Motion.SLIDE, Hand.LEFT, Speed.FAST, RED_RIGHT), still, 0, 1, VISUAL)
        right = synth_trajectory(ActionSpec(Motion.SLIDE, Hand.RIGHT, Speed.FAST, RED_RIGHT), still, 0, 1, VISUAL)
        assert left.joints[-1, 1] - left.joints[0, 1] > 0.5
        assert right.joints[-1, 6] - right.joints[0, 6] < -0.5

    def test_idle_arm_stays_still(self):
        spec = ActionSpec(Motion.PUSH, Hand.LEFT, Speed.FAST, RED_RIGHT)
        seq = synth_trajectory(spec, TrajectoryConfig(), 3, 1, VISUAL)
        assert np.all(seq.joints[:, 5:] == seq.joints[0, 5:])

    def test_lengths_and_bounds(self):
        cfg = TrajectoryConfig(t_slow=39, t_fast=26)
        for spec in enumerate_action_specs()[:12]:
            seq = synth_trajectory(spec, cfg, 1, 1, VISUAL)
            nominal = 39 if spec.speed == Speed.SLOWLY else 26
            assert abs(seq.length - nominal) <= 1
            assert np.all(np.abs(seq.joints) <= JOINT_LIMIT)

    def test_ends_at_rest(self):
        seq = synth_trajectory(enumerate_action_specs()[0], TrajectoryConfig(), 0, 1, VISUAL)
        assert np.array_equal(seq.joints[-1], seq.joints[-2])

    def test_deterministic(self):
        spec = enumerate_action_specs()[5]
        a = synth_trajectory(spec, TrajectoryConfig(), 9, 2, VISUAL)
        b = synth_trajectory(spec, TrajectoryConfig(), 9, 2, VISUAL)
        assert a.bitwise_equal(b)

    def test_invalid_lengths(self):
        with pytest.raises(ValueError):
            TrajectoryConfig(t_slow=10, t_fast=10)
        with pytest.raises(ValueError):
            TrajectoryConfig(t_slow=10, t_fast=3)


class TestVisualFeatures:
    """Scene encoding"""

    def test_one_hot_colours(self):
        features = visual_features((Color.GREEN, Color.RED), seed=0)
        assert features[:6].tolist() == [0.0, 1.0, 0.0, 1.0, 0.0, 0.0]
        assert features.shape == (10,)

    def test_left_colour_changes_only_first_block(self):
        a = visual_features((Color.GREEN, Color.RED), seed=4)
        b = visual_features((Color.YELLOW, Color.RED), seed=4)
        assert np.array_equal(a[3:], b[3:])
        assert not np.array_equal(a[:3], b[:3])

    def test_same_seed_identical(self):
        assert np.array_equal(visual_features((Color.RED, Color.GREEN), 8), visual_features((Color.RED, Color.GREEN), 8))


class TestDescribe:
    """Action descriptions"""

    def test_slide_red_slowly(self, lexicon):
        spec = ActionSpec(Motion.SLIDE, Hand.RIGHT, Speed.SLOWLY, RED_RIGHT)
        assert describe(spec, 1, lexicon).tokens == ("BOS", "slide", "red", "slowly", "EOS")
        assert describe(spec, 3, lexicon).tokens == ("BOS", "slip", "cardinal", "gradually", "EOS")

    def test_push_red_slowly(self, lexicon):
        spec = ActionSpec(Motion.PUSH, Hand.RIGHT, Speed.SLOWLY, RED_RIGHT)
        assert describe(spec, 1, lexicon).text() == "push red slowly"

    def test_mixed_word_sets(self, lexicon):
        spec = ActionSpec(Motion.PULL, Hand.LEFT, Speed.FAST, RED_RIGHT)
        assert describe_with(spec, (2, 3, 5), lexicon).words == ("drag", "olive", "quickly")

    def test_unseen_keys(self):
        assert unseen_key((2, 3, 4), 1) == "-"
        assert unseen_key((1, 3, 4), 1) == "verb"
        assert unseen_key((1, 3, 1), 1) == "adv+verb"
        assert unseen_key((2, 1, 1), 1) == "adj+adv"
        assert unseen_key((1, 1, 1), 1) == "verb+adj+adv"
        assert len(unseen_slots((1, 1, 4), 1)) == 2

    def test_description_needs_five_tokens(self):
        with pytest.raises(ValueError):
            Description(("BOS", "push", "EOS"))
