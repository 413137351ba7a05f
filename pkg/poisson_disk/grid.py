"""Cell lattice over the unit square and the point-to-cell neighbour relation."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator

from poisson_disk.errors import InvalidResolution, NonPositiveRadius
from poisson_disk.geom import MIN_DISK_VERTICES, ConvexPoly, FreeRegion, Point
from poisson_disk.rng import RngStream, exp_increment
from poisson_disk.settings import DEFAULT_K

SQRT2 = math.sqrt(2.0)
# relative pad on the conflict distance; keeps float rounding from ever
# producing a pair closer than r
DISK_PAD = 1e-9

CellIndex = tuple[int, int]


@dataclass(frozen=True)
class GridParams:
    r: float
    n: int
    s: float
    a0: float
    k: int

    @classmethod
    def from_radius(cls, r: float, k: int = DEFAULT_K) -> GridParams:
        """Coarsest lattice with spacing <= r / sqrt(2); r > sqrt(2) gives one cell."""
        if not r > 0.0 or not math.isfinite(r):
            raise NonPositiveRadius(f"exclusion radius must be positive and finite, got {r}")
        if k < MIN_DISK_VERTICES:
            raise InvalidResolution(f"disk polygons need at least {MIN_DISK_VERTICES} vertices, got {k}")
        n = max(1, math.ceil(SQRT2 / r))
        s = 1.0 / n
        return cls(r=r, n=n, s=s, a0=s * s, k=k)

    @property
    def exclusion_radius(self) -> float:
        """Conflict distance between candidates and accepted points; also the
        neighbour distance."""
        return self.r * (1.0 + DISK_PAD)

    @property
    def reach(self) -> float:
        """Circumradius of the circumscribed exclusion polygon.

        A cell is exhausted once these polygons cover it, so every point of the
        square lies within ``reach`` of the pattern.
        """
        return self.exclusion_radius / math.cos(math.pi / self.k)

    def window_steps(self, radius: float) -> int:
        """Index steps that cover every cell within ``radius`` of a cell's square."""
        return math.floor(radius / self.s) + 1


class CellState(enum.Enum):
    ACTIVE = "active"
    ACCEPTED = "accepted"
    EXHAUSTED = "exhausted"


class Cell:
    """One grid square.

    ACTIVE cells hold a candidate, its arrival time, their free region and the
    cached neighbour set of the candidate. ACCEPTED cells keep the accepted
    point in ``candidate`` and, once built, its circumscribed polygon in
    ``cover``. EXHAUSTED cells hold nothing.
    """

    __slots__ = ("index", "state", "candidate", "t", "region", "neighbors", "in_bucket", "cover")

    def __init__(self, index: CellIndex):
        self.index = index
        self.state = CellState.ACTIVE
        self.candidate: Point | None = None
        self.t = math.inf
        self.region: FreeRegion | None = None
        self.neighbors: tuple[CellIndex, ...] = ()
        self.in_bucket = False
        self.cover: ConvexPoly | None = None

    def __repr__(self) -> str:
        return f"Cell({self.index}, {self.state.value}, t={self.t:.6g})"

    @property
    def is_active(self) -> bool:
        return self.state is CellState.ACTIVE


class Grid:
    def __init__(self, params: GridParams):
        self.params = params
        n = params.n
        self.cells = [[Cell((i, j)) for j in range(n)] for i in range(n)]

    @property
    def n(self) -> int:
        return self.params.n

    def __getitem__(self, index: CellIndex) -> Cell:
        i, j = index
        return self.cells[i][j]

    def __iter__(self) -> Iterator[Cell]:
        """Cells in row-major (lexicographic index) order."""
        for column in self.cells:
            yield from column

    def __len__(self) -> int:
        return self.n * self.n

    def bounds(self, index: CellIndex) -> tuple[float, float, float, float]:
        i, j = index
        n = self.n
        return i / n, j / n, (i + 1) / n, (j + 1) / n

    def cell_of(self, p: tuple[float, float]) -> CellIndex:
        n = self.n
        i = min(max(math.floor(p[0] * n), 0), n - 1)
        j = min(max(math.floor(p[1] * n), 0), n - 1)
        return i, j

    def neighbor_cells(self, p: tuple[float, float], radius: float | None = None) -> tuple[CellIndex, ...]:
        """Indices of every cell whose closed square is within ``radius`` of p.

        Defaults to the exclusion radius. Returned in row-major order.
        """
        if radius is None:
            radius = self.params.exclusion_radius
        n = self.n
        x, y = p
        i_lo = max(0, math.floor((x - radius) * n) - 1)
        i_hi = min(n - 1, math.floor((x + radius) * n) + 1)
        j_lo = max(0, math.floor((y - radius) * n) - 1)
        j_hi = min(n - 1, math.floor((y + radius) * n) + 1)
        radius2 = radius * radius
        found = []
        for i in range(i_lo, i_hi + 1):
            x0, x1 = i / n, (i + 1) / n
            dx = x0 - x if x < x0 else (x - x1 if x > x1 else 0.0)
            if dx > radius:
                continue
            for j in range(j_lo, j_hi + 1):
                y0, y1 = j / n, (j + 1) / n
                dy = y0 - y if y < y0 else (y - y1 if y > y1 else 0.0)
                if dx * dx + dy * dy <= radius2:
                    found.append((i, j))
        return tuple(found)

    def window(self, index: CellIndex, steps: int) -> Iterator[CellIndex]:
        """In-grid indices within ``steps`` of ``index`` along both axes, row-major."""
        ci, cj = index
        n = self.n
        for i in range(max(0, ci - steps), min(n - 1, ci + steps) + 1):
            for j in range(max(0, cj - steps), min(n - 1, cj + steps) + 1):
                yield i, j

    def active_cells(self) -> list[Cell]:
        return [cell for cell in self if cell.is_active]


def init_grid(r: float, k: int, rng: RngStream) -> Grid:
    """Fresh grid: every cell ACTIVE over its full square.

    Consumes the stream in row-major cell order, candidate coordinates first,
    then the arrival time drawn with rate A0.
    """
    params = GridParams.from_radius(r, k)
    grid = Grid(params)
    for cell in grid:
        x0, y0, x1, y1 = grid.bounds(cell.index)
        cell.region = FreeRegion.from_box(x0, y0, x1, y1)
        candidate = Point(x0 + rng.uniform() * (x1 - x0), y0 + rng.uniform() * (y1 - y0))
        cell.candidate = candidate
        cell.t = exp_increment(params.a0, rng)
        cell.neighbors = grid.neighbor_cells(candidate)
    return grid


def cell_of(p: tuple[float, float], grid: Grid) -> CellIndex:
    return grid.cell_of(p)


def neighbor_cells(p: tuple[float, float], grid: Grid, radius: float | None = None) -> tuple[CellIndex, ...]:
    """Cells whose closed square is within ``radius`` of p.

    The default is r padded by DISK_PAD, the distance at which a candidate
    conflicts with an accepted point.
    """
    return grid.neighbor_cells(p, radius)
