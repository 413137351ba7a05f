"""Seeded uniform stream and exponential arrival increments."""

import math

import numpy as np

from poisson_disk.errors import DegenerateArea
from poisson_disk.geom import AREA_EPS

SEED_MASK = (1 << 64) - 1
BLOCK_SIZE = 4096


class RngStream:
    """Deterministic stream of uniform reals in [0, 1).

    Draws are pulled from numpy's PCG64 generator in blocks; the sequence
    only depends on the seed, never on the block size boundaries.
    """

    def __init__(self, seed: int, block_size: int = BLOCK_SIZE):
        self.seed = seed & SEED_MASK
        self._generator = np.random.Generator(np.random.PCG64(self.seed))
        self._block_size = block_size
        self._buffer: list[float] = []
        self._pos = 0

    def uniform(self) -> float:
        if self._pos >= len(self._buffer):
            self._buffer = self._generator.random(self._block_size).tolist()
            self._pos = 0
        value = self._buffer[self._pos]
        self._pos += 1
        return value

    def uniforms(self, count: int) -> np.ndarray:
        """The next ``count`` uniforms of the stream as an array."""
        pending = self._buffer[self._pos :]
        if count <= len(pending):
            self._pos += count
            return np.array(pending[:count], dtype=float)
        self._buffer = []
        self._pos = 0
        fresh = self._generator.random(count - len(pending))
        return np.concatenate([np.array(pending, dtype=float), fresh])

    def uniform_open(self) -> float:
        """Uniform in the open interval (0, 1)."""
        u = self.uniform()
        while u == 0.0:
            u = self.uniform()
        return u


def derive_seed(seed: int, index: int) -> int:
    return (seed + index) & SEED_MASK


def exp_increment(area: float, rng: RngStream) -> float:
    """Waiting time until the next arrival in a region of the given area.

    First arrivals of a unit-rate spatial Poisson process in a region of area
    A are exponential with rate A.
    """
    if not area > AREA_EPS:
        raise DegenerateArea(f"arrival increment needs area > {AREA_EPS}, got {area}")
    return -math.log(rng.uniform_open()) / area
