"""
Named splittable random streams

All randomness flows from one explicit 64-bit seed. A stream is split by
name (``stream.child("data", "trajectory", 3)``) into independent children,
so adding a consumer never shifts the numbers another consumer sees.
"""

import zlib
from typing import Tuple, Union

import numpy as np

StreamName = Union[str, int]

_MAX_SEED = 2**64


def _name_key(name: StreamName) -> int:
    return zlib.crc32(repr(name).encode("utf-8"))


class RngStream:
    """A deterministic node in a tree of random streams"""

    __slots__ = ("seed", "path")

    def __init__(self, seed: int, path: Tuple[int, ...] = ()):
        seed = int(seed)
        if not 0 <= seed < _MAX_SEED:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = seed
        self.path = tuple(path)

    def child(self, *names: StreamName) -> "RngStream":
        """Derive an independent child stream"""
        return RngStream(self.seed, self.path + tuple(_name_key(name) for name in names))

    def _sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(entropy=self.seed, spawn_key=self.path)

    def generator(self) -> np.random.Generator:
        """Fresh PCG64 generator positioned at the start of this stream"""
        return np.random.Generator(np.random.PCG64(self._sequence()))

    def integer_seed(self) -> int:
        """A 64-bit seed summarizing this stream, for APIs that take an int"""
        low, high = self._sequence().generate_state(2, dtype=np.uint32)
        return (int(high) << 32) | int(low)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, path={self.path})"
