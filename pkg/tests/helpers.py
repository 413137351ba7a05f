import math

import numpy as np

from poisson_disk.engine import Pattern, Sample
from poisson_disk.grid import GridParams
from poisson_disk.rng import RngStream


class FixedStream(RngStream):
    """Replays a fixed list of uniforms, then continues with PCG64."""

    def __init__(self, values, seed: int = 0):
        super().__init__(seed)
        self._replay = list(values)

    def uniform(self) -> float:
        if self._replay:
            return self._replay.pop(0)
        return super().uniform()


def within_sigmas(estimate: float, expected: float, sigma: float, sigmas: float = 3.0) -> bool:
    return math.fabs(estimate - expected) <= sigmas * sigma + 1e-12


def make_pattern(points, radius: float, method: str = "file") -> Pattern:
    samples = tuple(Sample(float(x), float(y), float(i + 1)) for i, (x, y) in enumerate(points))
    return Pattern(samples, GridParams.from_radius(radius), 0, len(samples), method)


def brute_min_distance(pattern: Pattern) -> float:
    xy = pattern.coords()
    diff = xy[:, None, :] - xy[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=-1))
    np.fill_diagonal(dist, np.inf)
    return float(dist.min())
