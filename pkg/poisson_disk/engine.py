"""Linear-time maximal Poisson-disk sampling.

Every grid cell holds the first arrival of a unit-rate Poisson process inside
its free region. A candidate whose arrival time beats every active neighbour
cannot be blocked by anything that arrives later, so it is accepted at once;
candidates it invalidates are redrawn in their shrunken region at a later
time. Regions lose the inscribed polygon of each accepted disk, and draws
that land inside a disk anyway are dropped like rejected darts. The bucket of locally-early cells is drained in FIFO order until every
cell is accepted or exhausted.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np

from poisson_disk.errors import InvariantViolation, StaleBucketEntry
from poisson_disk.geom import (
    AREA_EPS,
    FreeRegion,
    Point,
    convex_difference,
    discard_within,
    disk_polygon,
    inscribed_polygon,
    point_in_region,
    sample_uniform,
)
from poisson_disk.grid import Cell, CellIndex, CellState, Grid, GridParams, init_grid
from poisson_disk.rng import RngStream, exp_increment
from poisson_disk.settings import DEFAULT_K

__all__ = [
    "Bucket",
    "Pattern",
    "PatternBuilder",
    "PoissonDiskSampler",
    "RngStream",
    "Sample",
    "accept",
    "build_initial_bucket",
    "exp_increment",
    "is_locally_early",
    "iter_samples",
    "run",
]

logger = logging.getLogger(__name__)


class Sample(NamedTuple):
    x: float
    y: float
    t: float

    @property
    def point(self) -> Point:
        return Point(self.x, self.y)


@dataclass(frozen=True)
class Pattern:
    """Accepted points in acceptance order, with their arrival times."""

    samples: tuple[Sample, ...]
    params: GridParams
    seed: int
    generated_count: int
    method: str = "engine"

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def radius(self) -> float:
        return self.params.r

    @property
    def k(self) -> int:
        return self.params.k

    @property
    def points(self) -> tuple[Point, ...]:
        return tuple(s.point for s in self.samples)

    def coords(self) -> np.ndarray:
        if not self.samples:
            return np.empty((0, 2))
        return np.array([(s.x, s.y) for s in self.samples], dtype=float)

    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples], dtype=float)


@dataclass
class PatternBuilder:
    samples: list[Sample] = field(default_factory=list)
    generated_count: int = 0

    def append(self, p: Point, t: float) -> Sample:
        sample = Sample(p[0], p[1], t)
        self.samples.append(sample)
        return sample

    def freeze(self, params: GridParams, seed: int, method: str = "engine") -> Pattern:
        return Pattern(tuple(self.samples), params, seed, self.generated_count, method)


class Bucket:
    """FIFO of locally-early cells; membership is mirrored by ``Cell.in_bucket``."""

    def __init__(self, grid: Grid):
        self._grid = grid
        self._queue: deque[CellIndex] = deque()

    def __len__(self) -> int:
        return len(self._queue)

    def __bool__(self) -> bool:
        return bool(self._queue)

    def __iter__(self) -> Iterator[CellIndex]:
        return iter(self._queue)

    def push(self, index: CellIndex) -> bool:
        cell = self._grid[index]
        if cell.in_bucket:
            return False
        cell.in_bucket = True
        self._queue.append(index)
        return True

    def discard(self, index: CellIndex) -> None:
        if self._grid[index].in_bucket:
            self._queue.remove(index)
            self._grid[index].in_bucket = False

    def pop(self) -> CellIndex:
        index = self._queue.popleft()
        self._grid[index].in_bucket = False
        return index


def is_locally_early(c: CellIndex, grid: Grid) -> bool:
    """True when no active neighbour of c's candidate arrives earlier.

    Accepted and exhausted neighbours are ignored; equal times go to the
    lexicographically smaller cell index.
    """
    cell = grid[c]
    t = cell.t
    for d in cell.neighbors:
        if d == c:
            continue
        other = grid[d]
        if other.state is CellState.ACTIVE and (other.t < t or (other.t == t and d < c)):
            return False
    return True


def build_initial_bucket(grid: Grid) -> Bucket:
    bucket = Bucket(grid)
    for cell in grid:
        if cell.is_active and is_locally_early(cell.index, grid):
            bucket.push(cell.index)
    return bucket


def accept(c: CellIndex, grid: Grid, bucket: Bucket, pattern: PatternBuilder, rng: RngStream) -> int:
    """Accept the candidate of cell c and update everything it affects.

    Neighbouring free regions lose the inscribed polygon of the new point's
    disk. A neighbour whose candidate lies within the exclusion radius is
    redrawn at a later time, or exhausted when nothing free is left.
    Returns the number of cells visited, for work accounting.
    """
    cell = grid[c]
    if not cell.is_active:
        raise StaleBucketEntry(f"cell {c} left the bucket in state {cell.state.value}")
    params = grid.params
    p = cell.candidate
    cell.state = CellState.ACCEPTED
    cell.region = None
    pattern.append(p, cell.t)

    radius = params.exclusion_radius
    radius2 = radius * radius
    cut = inscribed_polygon(p, radius, params.k)
    changed = [c]
    visits = len(cell.neighbors)
    # every cell whose square meets the disk is a neighbour of p
    for d in cell.neighbors:
        other = grid[d]
        if d == c or other.state is not CellState.ACTIVE:
            continue
        region = convex_difference(other.region, cut)
        if region is not other.region:
            region = discard_within(region, p, radius)
        qx, qy = other.candidate
        hit = (qx - p[0]) ** 2 + (qy - p[1]) ** 2 < radius2
        if region is other.region and not hit:
            continue
        other.region = region
        if not hit and not region.is_empty:
            continue
        if other.in_bucket:
            bucket.discard(d)
        if region.is_empty or not redraw(other, grid, pattern, rng):
            exhaust(other)
        changed.append(d)

    steps = params.window_steps(radius)
    recheck: set[CellIndex] = set()
    for e in changed:
        recheck.update(grid.window(e, steps))
    visits += len(recheck)
    for f in sorted(recheck):
        other = grid[f]
        if other.state is CellState.ACTIVE and not other.in_bucket and is_locally_early(f, grid):
            bucket.push(f)
    return visits


def exhaust(cell: Cell) -> None:
    cell.state = CellState.EXHAUSTED
    cell.region = None
    cell.candidate = None
    cell.neighbors = ()


def redraw(cell: Cell, grid: Grid, pattern: PatternBuilder, rng: RngStream) -> bool:
    """Move the cell's candidate to the next arrival that is free of every disk.

    The free region still holds the thin caps between each inscribed polygon
    and its disk. Draws landing within the exclusion radius of an accepted
    point are thrown away, keeping their waiting time, exactly like rejected
    darts. Returns False once the circumscribed polygons of the accepted
    points cover the region.
    """
    region = cell.region
    radius2 = grid.params.exclusion_radius ** 2
    cover_checked = False
    while True:
        q = sample_uniform(region, rng)
        cell.t += exp_increment(region.area, rng)
        pattern.generated_count += 1
        neighbors = grid.neighbor_cells(q)
        if not any(_conflicts(q, grid[d], radius2) for d in neighbors):
            cell.candidate = q
            cell.neighbors = neighbors
            return True
        if not cover_checked:
            if is_covered(cell.index, region, grid):
                return False
            cover_checked = True


def _conflicts(q: Point, other: Cell, radius2: float) -> bool:
    if other.state is not CellState.ACCEPTED:
        return False
    px, py = other.candidate
    return (q[0] - px) ** 2 + (q[1] - py) ** 2 < radius2


def is_covered(c: CellIndex, region: FreeRegion, grid: Grid) -> bool:
    """True when the circumscribed polygons of nearby accepted points cover ``region``."""
    params = grid.params
    for d in grid.window(c, params.window_steps(params.reach)):
        other = grid[d]
        if other.state is not CellState.ACCEPTED:
            continue
        if other.cover is None:
            other.cover = disk_polygon(other.candidate, params.exclusion_radius, params.k)
        region = convex_difference(region, other.cover)
        if region.is_empty:
            return True
    return False


class InvariantMonitor:
    """Run-time checks for debug runs; raises InvariantViolation on failure."""

    AREA_SLACK = 1e-12

    def __init__(self, grid: Grid, bucket: Bucket):
        self.grid = grid
        self.bucket = bucket
        self._history: dict[CellIndex, tuple[float, float]] = {}
        self.check()

    def check(self, accepted: Sample | None = None) -> None:
        grid = self.grid
        any_active = False
        for cell in grid:
            if cell.state is CellState.ACTIVE:
                any_active = True
                self._check_active(cell)
            elif cell.state is CellState.ACCEPTED:
                x0, y0, x1, y1 = grid.bounds(cell.index)
                x, y = cell.candidate
                if not (x0 - 1e-12 <= x <= x1 + 1e-12 and y0 - 1e-12 <= y <= y1 + 1e-12):
                    raise InvariantViolation(f"accepted point {cell.candidate} outside cell {cell.index}")
        if any_active and not self.bucket:
            raise InvariantViolation("bucket is empty while active cells remain")
        self._check_bucket()
        if accepted is not None:
            self._check_spacing(accepted)

    def _check_active(self, cell) -> None:
        region = cell.region
        if not region.area > AREA_EPS:
            raise InvariantViolation(f"active cell {cell.index} has area {region.area}")
        if not point_in_region(cell.candidate, region):
            raise InvariantViolation(f"candidate of cell {cell.index} is outside its free region")
        radius2 = self.grid.params.exclusion_radius ** 2
        if any(_conflicts(cell.candidate, self.grid[d], radius2) for d in cell.neighbors):
            raise InvariantViolation(f"candidate of cell {cell.index} lies inside an accepted disk")
        if not (math.isfinite(cell.t) and cell.t > 0.0):
            raise InvariantViolation(f"cell {cell.index} has arrival time {cell.t}")
        previous = self._history.get(cell.index)
        if previous is not None:
            t_before, area_before = previous
            if cell.t < t_before:
                raise InvariantViolation(f"arrival time of cell {cell.index} decreased")
            if region.area > area_before + self.AREA_SLACK:
                raise InvariantViolation(f"free region of cell {cell.index} grew")
        self._history[cell.index] = (cell.t, region.area)

    def _check_bucket(self) -> None:
        r = self.grid.params.r
        entries = list(self.bucket)
        if len(set(entries)) != len(entries):
            raise InvariantViolation("duplicate bucket entries")
        points = []
        for index in entries:
            cell = self.grid[index]
            if not cell.is_active or not cell.in_bucket:
                raise InvariantViolation(f"bucket entry {index} is stale")
            if not is_locally_early(index, self.grid):
                raise InvariantViolation(f"bucket entry {index} is not locally early")
            points.append(cell.candidate)
        if len(points) > 1:
            xy = np.array(points)
            diff = xy[:, None, :] - xy[None, :, :]
            dist = np.sqrt((diff**2).sum(axis=-1))
            np.fill_diagonal(dist, np.inf)
            if dist.min() < r:
                raise InvariantViolation(f"bucket candidates only {dist.min()} apart (r={r})")

    def _check_spacing(self, accepted: Sample) -> None:
        grid = self.grid
        r = grid.params.r
        for index in grid.neighbor_cells(accepted.point, radius=r):
            cell = grid[index]
            if cell.state is CellState.ACCEPTED and cell.candidate != accepted.point:
                if math.dist(cell.candidate, accepted.point) < r:
                    raise InvariantViolation(f"accepted points {cell.candidate} and {accepted.point} closer than {r}")


class PoissonDiskSampler:
    """One sampling run over a fresh grid; iterate to stream accepted samples."""

    def __init__(self, r: float, k: int = DEFAULT_K, seed: int = 0, *, check_invariants: bool = False):
        self.seed = seed
        self.rng = RngStream(seed)
        self.grid = init_grid(r, k, self.rng)
        self.params = self.grid.params
        self.pattern = PatternBuilder(generated_count=len(self.grid))
        self.bucket = build_initial_bucket(self.grid)
        self.max_visits_per_accept = 0
        self.total_visits = 0
        self.monitor = InvariantMonitor(self.grid, self.bucket) if check_invariants else None
        logger.debug("grid n=%d for r=%g; %d cells initially early", self.params.n, r, len(self.bucket))

    def step(self) -> Sample:
        c = self.bucket.pop()
        visits = accept(c, self.grid, self.bucket, self.pattern, self.rng)
        self.total_visits += visits
        self.max_visits_per_accept = max(self.max_visits_per_accept, visits)
        sample = self.pattern.samples[-1]
        if self.monitor is not None:
            self.monitor.check(sample)
        return sample

    def __iter__(self) -> Iterator[Sample]:
        while self.bucket:
            yield self.step()
        self._check_terminal()

    def _check_terminal(self) -> None:
        remaining = self.grid.active_cells()
        if remaining:
            raise InvariantViolation(f"bucket drained with {len(remaining)} active cells left")

    def result(self) -> Pattern:
        return self.pattern.freeze(self.params, self.seed)

    def run(self) -> Pattern:
        for _ in self:
            pass
        pattern = self.result()
        logger.debug(
            "accepted %d points from %d candidates (r=%g, k=%d, seed=%d)",
            len(pattern),
            pattern.generated_count,
            self.params.r,
            self.params.k,
            self.seed,
        )
        return pattern


def run(r: float, k: int = DEFAULT_K, seed: int = 0, *, check_invariants: bool = False) -> Pattern:
    """Maximal Poisson-disk pattern over the unit square, deterministic in (r, k, seed)."""
    return PoissonDiskSampler(r, k, seed, check_invariants=check_invariants).run()


def iter_samples(r: float, k: int = DEFAULT_K, seed: int = 0) -> Iterator[Sample]:
    """Accepted samples one at a time, in acceptance order."""
    yield from PoissonDiskSampler(r, k, seed)
