"""
Action specs - motion, hand, speed and the two-cube arrangement

Three colours give 3P2 = 6 ordered (left, right) arrangements; each
arrangement has 3 motions x 2 hands x 2 speeds = 12 actions, 72 in total.
"""

from dataclasses import dataclass
from enum import Enum
from itertools import permutations, product
from typing import List, Tuple


class Motion(str, Enum):
    PULL = "PULL"
    PUSH = "PUSH"
    SLIDE = "SLIDE"


class Hand(str, Enum):
    LEFT = "LEFT"
    RIGHT = "RIGHT"


class Speed(str, Enum):
    SLOWLY = "SLOWLY"
    FAST = "FAST"


class Color(str, Enum):
    RED = "red"
    GREEN = "green"
    YELLOW = "yellow"


COLOR_ORDER: Tuple[Color, ...] = (Color.RED, Color.GREEN, Color.YELLOW)

ACTIONS_PER_ARRANGEMENT = 12

# synonym group label each component maps to
MOTION_GROUP = {Motion.PULL: "pull", Motion.PUSH: "push", Motion.SLIDE: "slide"}
COLOR_GROUP = {Color.RED: "red", Color.GREEN: "green", Color.YELLOW: "yellow"}
SPEED_GROUP = {Speed.SLOWLY: "slowly", Speed.FAST: "fast"}


@dataclass(frozen=True)
class ActionSpec:
    """Discrete description of one robot action in one scene"""

    motion: Motion
    hand: Hand
    speed: Speed
    arrangement: Tuple[Color, Color]

    def __post_init__(self) -> None:
        left, right = self.arrangement
        if left == right:
            raise ValueError("the two cubes must have distinct colours")

    @property
    def acting_color(self) -> Color:
        """Colour of the cube on the acting hand's side"""
        return self.arrangement[0] if self.hand == Hand.LEFT else self.arrangement[1]

    @property
    def name(self) -> str:
        return f"{self.motion.value}-{self.hand.value}-{self.speed.value}"

    @property
    def key(self) -> str:
        """Stable identifier including the scene"""
        return f"{self.name}@{self.arrangement[0].value}/{self.arrangement[1].value}"

    def with_hand(self, hand: Hand) -> "ActionSpec":
        return ActionSpec(self.motion, hand, self.speed, self.arrangement)

    def to_dict(self) -> dict:
        return {
            "motion": self.motion.value,
            "hand": self.hand.value,
            "speed": self.speed.value,
            "arrangement": [self.arrangement[0].value, self.arrangement[1].value],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ActionSpec":
        left, right = data["arrangement"]
        return cls(Motion(data["motion"]), Hand(data["hand"]), Speed(data["speed"]), (Color(left), Color(right)))


def enumerate_arrangements() -> List[Tuple[Color, Color]]:
    """The 6 ordered (left, right) colour pairs"""
    return list(permutations(COLOR_ORDER, 2))


def enumerate_action_specs() -> List[ActionSpec]:
    """All 72 action patterns in canonical order: arrangement, motion, hand, speed"""
    return [
        ActionSpec(motion, hand, speed, arrangement)
        for arrangement in enumerate_arrangements()
        for motion, hand, speed in product(Motion, Hand, Speed)
    ]
