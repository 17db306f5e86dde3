"""
Visual features - a parametric stand-in for the camera image encoder

Dims 0-2 one-hot the left cube colour, dims 3-5 the right cube colour,
dims 6-9 carry Gaussian nuisance noise.
"""

from typing import Tuple

import numpy as np

from retrofit_prae.simdata.actions import COLOR_ORDER, Color

VISUAL_DIM = 10
NUISANCE_STD = 0.05


def visual_features(arrangement: Tuple[Color, Color], seed: int, noise: float = NUISANCE_STD) -> np.ndarray:
    """
    Features of the initial scene for a (left, right) colour arrangement

    Args:
        arrangement: Ordered (left colour, right colour)
        seed: Seed for the nuisance dimensions
        noise: Std of the nuisance dimensions

    Returns:
        Read-only float64 vector of length 10
    """
    left, right = Color(arrangement[0]), Color(arrangement[1])
    features = np.zeros(VISUAL_DIM)
    features[COLOR_ORDER.index(left)] = 1.0
    features[3 + COLOR_ORDER.index(right)] = 1.0
    rng = np.random.Generator(np.random.PCG64(seed))
    features[6:] = rng.normal(0.0, noise, size=VISUAL_DIM - 6)
    features.setflags(write=False)
    return features
