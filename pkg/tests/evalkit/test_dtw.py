"""
Dynamic time warping tests
"""

import numpy as np
import pytest

from retrofit_prae.evalkit.dtw import SequenceError, accumulated_costs, dtw, warping_path


def brute_force_dtw(a, b):
    """Minimum over every monotone warping path"""
    a = np.asarray(a, dtype=float).reshape(len(a), -1)
    b = np.asarray(b, dtype=float).reshape(len(b), -1)
    best = np.inf

    def walk(i, j, cost):
        nonlocal best
        cost += float(np.linalg.norm(a[i] - b[j]))
        if i == len(a) - 1 and j == len(b) - 1:
            best = min(best, cost)
            return
        if i + 1 < len(a):
            walk(i + 1, j, cost)
        if j + 1 < len(b):
            walk(i, j + 1, cost)
        if i + 1 < len(a) and j + 1 < len(b):
            walk(i + 1, j + 1, cost)

    walk(0, 0, 0.0)
    return best


class TestDtw:
    """Accumulated Euclidean alignment cost"""

    def test_identical_sequences(self):
        a = np.random.default_rng(0).standard_normal((7, 10))
        assert dtw(a, a) == 0.0

    def test_repeated_frame_costs_nothing(self):
        assert dtw([1.0, 2.0, 3.0], [1.0, 2.0, 2.0, 3.0]) == 0.0

    def test_scalar_example(self):
        assert dtw([0.0, 1.0, 2.0], [0.0, 2.0]) == pytest.approx(1.0)

    def test_matches_brute_force(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            d = int(rng.integers(1, 4))
            a = rng.standard_normal((int(rng.integers(1, 7)), d))
            b = rng.standard_normal((int(rng.integers(1, 7)), d))
            assert dtw(a, b) == pytest.approx(brute_force_dtw(a, b), abs=1e-9)

    def test_zero_self_distance_and_symmetry(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            d = int(rng.integers(1, 4))
            a = rng.standard_normal((int(rng.integers(1, 10)), d))
            b = rng.standard_normal((int(rng.integers(1, 10)), d))
            assert dtw(a, a) == 0.0
            assert dtw(a, b) == pytest.approx(dtw(b, a), abs=1e-12)

    def test_normalized_by_path_length(self):
        a, b = [0.0, 1.0, 2.0], [0.0, 2.0]
        D = accumulated_costs(a, b)
        path = warping_path(D)
        assert path[0] == (0, 0) and path[-1] == (2, 1)
        assert dtw(a, b, normalize=True) == pytest.approx(dtw(a, b) / len(path))

    def test_rejects_bad_input(self):
        with pytest.raises(SequenceError):
            dtw([], [1.0])
        with pytest.raises(SequenceError):
            dtw(np.zeros((3, 2)), np.zeros((3, 3)))
