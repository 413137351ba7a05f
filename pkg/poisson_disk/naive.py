"""Dart-throwing reference sampler.

Uniform darts are accepted iff they are at least r from every accepted point;
the run stops after a fixed number of consecutive rejections. Darts are
thrown in numpy batches, and once a dart of a batch is accepted the rest of
the batch is re-tested against that point only, so the accept/reject sequence
is exactly the sequential one.
"""

import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from poisson_disk.engine import Pattern, Sample
from poisson_disk.grid import GridParams
from poisson_disk.rng import RngStream
from poisson_disk.settings import DEFAULT_K

logger = logging.getLogger(__name__)

DEFAULT_STOP_AFTER_REJECTIONS = 100_000
DEFAULT_BATCH_SIZE = 1024


class NaiveConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    r: float = Field(gt=0)
    seed: int = 0
    stop_after_rejections: int = Field(default=DEFAULT_STOP_AFTER_REJECTIONS, ge=1)
    brute_force: bool = False
    batch_size: int = Field(default=DEFAULT_BATCH_SIZE, ge=1)


class _Occupancy:
    """Accepted points plus an r-spaced background grid (one point per cell)."""

    def __init__(self, params: GridParams):
        self.n = params.n
        self.r2 = params.r * params.r
        self.pad = math.ceil(params.r * params.n)
        size = self.n + 2 * self.pad
        self.cells = np.full((size, size), -1, dtype=np.int64)
        self.xs = np.empty(self.n * self.n + 1)
        self.ys = np.empty(self.n * self.n + 1)
        self.count = 0
        steps = range(-self.pad, self.pad + 1)
        self.offsets = [(di, dj) for di in steps for dj in steps]

    def add(self, x: float, y: float) -> None:
        if self.count == len(self.xs):
            self.xs = np.concatenate([self.xs, np.empty(len(self.xs))])
            self.ys = np.concatenate([self.ys, np.empty(len(self.ys))])
        self.xs[self.count] = x
        self.ys[self.count] = y
        i, j = self._cell(np.array([x]), np.array([y]))
        self.cells[i[0], j[0]] = self.count
        self.count += 1

    def _cell(self, x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        i = np.minimum((x * self.n).astype(np.int64), self.n - 1) + self.pad
        j = np.minimum((y * self.n).astype(np.int64), self.n - 1) + self.pad
        return i, j

    def conflicts_grid(self, darts: np.ndarray) -> np.ndarray:
        conflict = np.zeros(len(darts), dtype=bool)
        if self.count == 0:
            return conflict
        x, y = darts[:, 0], darts[:, 1]
        ci, cj = self._cell(x, y)
        for di, dj in self.offsets:
            occupant = self.cells[ci + di, cj + dj]
            present = occupant >= 0
            if not present.any():
                continue
            idx = occupant[present]
            d2 = (self.xs[idx] - x[present]) ** 2 + (self.ys[idx] - y[present]) ** 2
            conflict[present] |= d2 < self.r2
        return conflict

    def conflicts_brute_force(self, darts: np.ndarray) -> np.ndarray:
        if self.count == 0:
            return np.zeros(len(darts), dtype=bool)
        dx = darts[:, 0, None] - self.xs[None, : self.count]
        dy = darts[:, 1, None] - self.ys[None, : self.count]
        return np.any(dx * dx + dy * dy < self.r2, axis=1)


def naive_run(cfg: NaiveConfig) -> Pattern:
    """Dart throwing until ``stop_after_rejections`` consecutive rejections.

    Each accepted point's time is its 1-based dart number; the pattern's
    generated count is the total number of darts thrown.
    """
    params = GridParams.from_radius(cfg.r, DEFAULT_K)
    rng = RngStream(cfg.seed)
    occupancy = _Occupancy(params)
    conflicts = occupancy.conflicts_brute_force if cfg.brute_force else occupancy.conflicts_grid
    samples: list[Sample] = []
    darts = 0
    streak = 0
    stop = cfg.stop_after_rejections

    while streak < stop:
        batch = rng.uniforms(2 * cfg.batch_size).reshape(cfg.batch_size, 2)
        conflict = conflicts(batch)
        pos = 0
        while pos < len(batch):
            free = np.flatnonzero(~conflict[pos:])
            rejected = len(batch) - pos if free.size == 0 else int(free[0])
            if streak + rejected >= stop:
                darts += stop - streak
                streak = stop
                break
            darts += rejected
            streak += rejected
            if free.size == 0:
                break
            hit = pos + rejected
            x, y = float(batch[hit, 0]), float(batch[hit, 1])
            darts += 1
            streak = 0
            samples.append(Sample(x, y, float(darts)))
            occupancy.add(x, y)
            tail = batch[hit + 1 :]
            conflict[hit + 1 :] |= (tail[:, 0] - x) ** 2 + (tail[:, 1] - y) ** 2 < occupancy.r2
            pos = hit + 1

    logger.debug("naive run r=%g seed=%d: %d points from %d darts", cfg.r, cfg.seed, len(samples), darts)
    return Pattern(tuple(samples), params, cfg.seed, darts, method="naive")
