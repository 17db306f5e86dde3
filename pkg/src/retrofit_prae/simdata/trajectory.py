"""
Trajectory synthesis - minimum-jerk joint profiles for the 10-DoF arms

Joints 0-4 are the left arm, 5-9 the right arm. Within an arm, index 0 is
the reach dimension (PUSH +A, PULL -A), index 1 the lateral dimension
(SLIDE moves inward), index 3 the elbow. The acting arm moves from a start
to a goal pose along 10t^3 - 15t^4 + 6t^5 and holds the goal for the last
``settle_steps`` frames; the other arm stays at rest. Noise perturbs the
start and goal control points per joint; the length jitter is fixed per
action.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from retrofit_prae.ndkernel.rng import RngStream
from retrofit_prae.simdata.actions import ActionSpec, Hand, Motion, Speed

N_JOINTS = 10
ARM_JOINTS = 5
JOINT_LIMIT = 0.8

REACH = 0
LATERAL = 1
ELBOW = 3
WRIST = 4

REST_ARM = np.array([0.1, 0.0, 0.0, -0.2, 0.0])


class TrajectoryConfig(BaseModel):
    """Shape and timing of synthesized trajectories"""

    t_slow: int = Field(20, description="Nominal SLOWLY length")
    t_fast: int = Field(12, description="Nominal FAST length")
    noise: float = Field(0.01, ge=0.0, description="Std of control-point noise")
    amplitude: float = Field(0.6, gt=0.0, le=0.7, description="Displacement A of the designated dimension")
    jitter: int = Field(1, ge=0, description="Length jitter bound, lengths vary in [-jitter, +jitter]")
    settle_steps: int = Field(2, ge=0, description="Frames holding the goal pose at the end")

    @model_validator(mode="after")
    def _check_lengths(self) -> "TrajectoryConfig":
        if not self.t_slow > self.t_fast >= 4:
            raise ValueError(f"need t_slow > t_fast >= 4, got {self.t_slow}/{self.t_fast}")
        if self.t_fast - self.jitter < 3:
            raise ValueError("jitter too large for t_fast")
        return self


@dataclass(frozen=True, eq=False)
class ActionSequence:
    """Joint-angle time series plus the visual features of the initial scene"""

    joints: np.ndarray  # [T, 10]
    visual: np.ndarray  # [10]

    def __post_init__(self) -> None:
        joints = np.array(self.joints, dtype=np.float64)
        visual = np.array(self.visual, dtype=np.float64).reshape(-1)
        if joints.ndim != 2 or joints.shape[1] != N_JOINTS or joints.shape[0] < 1:
            raise ValueError(f"joints must be [T, {N_JOINTS}], got {list(joints.shape)}")
        if visual.shape != (10,):
            raise ValueError(f"visual features must have length 10, got {visual.shape[0]}")
        if np.any(np.abs(joints) > JOINT_LIMIT):
            raise ValueError(f"joint values must lie in [-{JOINT_LIMIT}, {JOINT_LIMIT}]")
        joints.setflags(write=False)
        visual.setflags(write=False)
        object.__setattr__(self, "joints", joints)
        object.__setattr__(self, "visual", visual)

    @property
    def length(self) -> int:
        return int(self.joints.shape[0])

    def bitwise_equal(self, other: "ActionSequence") -> bool:
        return self.joints.tobytes() == other.joints.tobytes() and self.visual.tobytes() == other.visual.tobytes()


def min_jerk(tau: np.ndarray) -> np.ndarray:
    """Normalized minimum-jerk position profile on [0, 1]"""
    tau = np.clip(tau, 0.0, 1.0)
    return tau**3 * (10.0 - 15.0 * tau + 6.0 * tau * tau)


def arm_offset(hand: Hand) -> int:
    return 0 if hand == Hand.LEFT else ARM_JOINTS


def designated_joint(spec: ActionSpec) -> Tuple[int, float]:
    """(joint index, sign) of the dimension the motion displaces"""
    offset = arm_offset(spec.hand)
    if spec.motion == Motion.PUSH:
        return offset + REACH, 1.0
    if spec.motion == Motion.PULL:
        return offset + REACH, -1.0
    return offset + LATERAL, 1.0 if spec.hand == Hand.LEFT else -1.0


def motion_delta(spec: ActionSpec, amplitude: float) -> np.ndarray:
    """Goal minus start for all 10 joints"""
    delta = np.zeros(N_JOINTS)
    offset = arm_offset(spec.hand)
    index, sign = designated_joint(spec)
    delta[index] = sign * amplitude
    if spec.motion == Motion.SLIDE:
        delta[offset + WRIST] = 0.3 * amplitude
    else:
        delta[offset + ELBOW] = 0.5 * sign * amplitude
    return delta


def rest_pose() -> np.ndarray:
    return np.concatenate([REST_ARM, REST_ARM])


def nominal_length(spec: ActionSpec, cfg: TrajectoryConfig) -> int:
    return cfg.t_slow if spec.speed == Speed.SLOWLY else cfg.t_fast


def synth_trajectory(
    spec: ActionSpec,
    cfg: TrajectoryConfig,
    seed: int,
    repetition: int,
    visual: np.ndarray,
) -> ActionSequence:
    """
    Deterministic joint trajectory for (seed, spec, repetition)

    The length jitter is drawn per (seed, spec), so with zero noise all
    repetitions of an action are identical.

    Args:
        spec: Action to perform
        cfg: Lengths, noise and amplitude
        seed: Root seed
        repetition: Repetition index (1-based)
        visual: Initial-scene features attached to the sequence

    Returns:
        ActionSequence with T = nominal length + jitter in [-jitter, +jitter]
    """
    root = RngStream(seed)
    # one length per action; repetitions differ only through the control-point noise
    length_rng = root.child("length", spec.key).generator()
    jitter = int(length_rng.integers(-cfg.jitter, cfg.jitter + 1)) if cfg.jitter else 0
    rng = root.child("trajectory", spec.key, repetition).generator()
    length = nominal_length(spec, cfg) + jitter

    rest = rest_pose()
    start = rest + rng.normal(0.0, cfg.noise, size=N_JOINTS) if cfg.noise > 0 else rest.copy()
    goal = rest + motion_delta(spec, cfg.amplitude)
    if cfg.noise > 0:
        goal = goal + rng.normal(0.0, cfg.noise, size=N_JOINTS)

    # only the acting arm moves; the other one holds its (noisy) start pose
    idle = slice(ARM_JOINTS, N_JOINTS) if spec.hand == Hand.LEFT else slice(0, ARM_JOINTS)
    goal[idle] = start[idle]

    settle = min(cfg.settle_steps, length - 2)
    span = length - 1 - settle
    tau = np.arange(length, dtype=np.float64) / span
    profile = min_jerk(tau)[:, None]
    joints = np.clip(start + (goal - start) * profile, -JOINT_LIMIT, JOINT_LIMIT)
    return ActionSequence(joints=joints, visual=visual)
