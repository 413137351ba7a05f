"""Planar geometry kernel for free regions.

Free regions are unions of interior-disjoint convex polygons. Subtracting a
convex polygon splits every overlapped piece along the wedge decomposition of
the subtrahend's complement, so area, membership and uniform sampling all stay
linear in the number of pieces.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import TYPE_CHECKING, NamedTuple, Sequence

import numpy as np

from poisson_disk.errors import EmptyRegion, InvalidResolution, NonPositiveRadius

if TYPE_CHECKING:
    from poisson_disk.rng import RngStream

AREA_EPS = 1e-12
MEMBERSHIP_TOL = 1e-9
CONVEXITY_TOL = 1e-12
MIN_DISK_VERTICES = 8


class Point(NamedTuple):
    x: float
    y: float


class HalfPlane(NamedTuple):
    """The closed set {z : normal . z <= offset}, with a unit normal."""

    nx: float
    ny: float
    offset: float

    @classmethod
    def normalized(cls, nx: float, ny: float, offset: float) -> HalfPlane:
        length = math.hypot(nx, ny)
        if length == 0.0:
            raise ValueError("half-plane normal must be non-zero")
        return cls(nx / length, ny / length, offset / length)

    def flipped(self) -> HalfPlane:
        return HalfPlane(-self.nx, -self.ny, -self.offset)


class Overlap(enum.Enum):
    DISJOINT = "disjoint"
    INSIDE = "inside"
    UNKNOWN = "unknown"


def shoelace_area(vertices: Sequence[tuple[float, float]]) -> float:
    """Signed area, positive for counter-clockwise vertex order."""
    total = 0.0
    x0, y0 = vertices[-1]
    for x1, y1 in vertices:
        total += x0 * y1 - x1 * y0
        x0, y0 = x1, y1
    return 0.5 * total


class ConvexPoly:
    """Counter-clockwise convex polygon with cached area and bounding box.

    Instances are never mutated; half-planes, their array form, the vertex
    array and the triangle fan are built on first use.
    """

    __slots__ = ("vertices", "area", "bbox", "_halfplanes", "_planes", "_array", "_fan")

    def __init__(self, vertices: Sequence[tuple[float, float]]):
        self.vertices = tuple(vertices)
        self.area = shoelace_area(self.vertices)
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        self.bbox = (min(xs), min(ys), max(xs), max(ys))
        self._halfplanes: tuple[HalfPlane, ...] | None = None
        self._planes: tuple[np.ndarray, np.ndarray] | None = None
        self._array: np.ndarray | None = None
        self._fan: tuple[tuple[float, tuple, tuple, tuple], ...] | None = None

    @classmethod
    def validated(cls, vertices: Sequence[tuple[float, float]]) -> ConvexPoly:
        """Build a polygon, rejecting non-convex, clockwise or degenerate input."""
        if len(vertices) < 3:
            raise ValueError("a convex polygon needs at least 3 vertices")
        poly = cls([Point(float(x), float(y)) for x, y in vertices])
        if not poly.area > AREA_EPS:
            raise ValueError(f"polygon area {poly.area} is not above {AREA_EPS}")
        if not poly.is_convex():
            raise ValueError("polygon is not convex in counter-clockwise order")
        return poly

    def __repr__(self) -> str:
        return f"ConvexPoly({len(self.vertices)} vertices, area={self.area:.6g})"

    def __len__(self) -> int:
        return len(self.vertices)

    def is_convex(self, tol: float = CONVEXITY_TOL) -> bool:
        vs = self.vertices
        count = len(vs)
        for i in range(count):
            ax, ay = vs[i - 1]
            bx, by = vs[i]
            cx, cy = vs[(i + 1) % count]
            if (bx - ax) * (cy - by) - (by - ay) * (cx - bx) < -tol:
                return False
        return True

    @property
    def halfplanes(self) -> tuple[HalfPlane, ...]:
        """Inward half-planes, one per edge, in edge order."""
        if self._halfplanes is None:
            planes = []
            vs = self.vertices
            ax, ay = vs[-1]
            for bx, by in vs:
                ex, ey = bx - ax, by - ay
                length = math.hypot(ex, ey)
                if length > 0.0:
                    nx, ny = ey / length, -ex / length
                    planes.append(HalfPlane(nx, ny, nx * ax + ny * ay))
                ax, ay = bx, by
            self._halfplanes = tuple(planes)
        return self._halfplanes

    @property
    def plane_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Edge normals as a (k, 2) array and their offsets as a (k,) array."""
        if self._planes is None:
            planes = np.array(self.halfplanes, dtype=float)
            self._planes = (planes[:, :2], planes[:, 2])
        return self._planes

    @property
    def vertex_array(self) -> np.ndarray:
        if self._array is None:
            self._array = np.array(self.vertices, dtype=float)
        return self._array

    @property
    def fan(self) -> tuple[tuple[float, tuple, tuple, tuple], ...]:
        """Fan triangulation from the first vertex as (area, a, b, c) tuples."""
        if self._fan is None:
            vs = self.vertices
            a = vs[0]
            triangles = []
            for b, c in zip(vs[1:-1], vs[2:]):
                area = 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
                if area > 0.0:
                    triangles.append((area, a, b, c))
            self._fan = tuple(triangles)
        return self._fan

    def contains(self, q: tuple[float, float], tol: float = MEMBERSHIP_TOL) -> bool:
        x, y = q
        for nx, ny, offset in self.halfplanes:
            if nx * x + ny * y - offset > tol:
                return False
        return True

    def max_dist2(self, center: tuple[float, float]) -> float:
        """Squared distance from ``center`` to the farthest vertex."""
        cx, cy = center
        return max((x - cx) * (x - cx) + (y - cy) * (y - cy) for x, y in self.vertices)

    def overlap(self, piece: ConvexPoly) -> Overlap:
        """Cheap classification of ``piece`` against this polygon's interior."""
        x0, y0, x1, y1 = piece.bbox
        px0, py0, px1, py1 = self.bbox
        if x0 >= px1 or x1 <= px0 or y0 >= py1 or y1 <= py0:
            return Overlap.DISJOINT
        return Overlap.UNKNOWN


class RegularPoly(ConvexPoly):
    """Regular k-gon around a center, first vertex on the positive x axis."""

    __slots__ = ("center", "apothem", "circumradius", "k")

    def __init__(self, center: tuple[float, float], apothem: float, circumradius: float, k: int):
        cx, cy = center
        super().__init__([Point(cx + circumradius * dx, cy + circumradius * dy) for dx, dy in _unit_directions(k)])
        self.center = Point(cx, cy)
        self.apothem = apothem
        self.circumradius = circumradius
        self.k = k
        self.bbox = (cx - circumradius, cy - circumradius, cx + circumradius, cy + circumradius)

    @property
    def plane_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if self._planes is None:
            normals = _unit_normals(self.k)
            self._planes = (normals, normals @ np.array(self.center) + self.apothem)
        return self._planes

    def overlap(self, piece: ConvexPoly) -> Overlap:
        relation = super().overlap(piece)
        if relation is Overlap.UNKNOWN and piece.max_dist2(self.center) <= self.apothem * self.apothem:
            return Overlap.INSIDE
        return relation


@dataclass(frozen=True, slots=True)
class FreeRegion:
    """Interior-disjoint convex pieces with their total area cached."""

    pieces: tuple[ConvexPoly, ...] = ()
    area: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        object.__setattr__(self, "area", math.fsum(p.area for p in self.pieces))

    @classmethod
    def empty(cls) -> FreeRegion:
        return cls(())

    @classmethod
    def square(cls, x0: float, y0: float, side: float) -> FreeRegion:
        return cls.from_box(x0, y0, x0 + side, y0 + side)

    @classmethod
    def from_box(cls, x0: float, y0: float, x1: float, y1: float) -> FreeRegion:
        return cls((ConvexPoly(((x0, y0), (x1, y0), (x1, y1), (x0, y1))),))

    @property
    def is_empty(self) -> bool:
        return self.area <= AREA_EPS


def split_halfplane(poly: ConvexPoly, h: HalfPlane) -> tuple[ConvexPoly | None, ConvexPoly | None]:
    """Split a convex polygon into its parts inside and outside ``h``.

    One Sutherland-Hodgman pass builds both sides. A side equal to the whole
    polygon is the input object; a side without area above AREA_EPS is None.
    """
    nx, ny, offset = h
    vertices = poly.vertices
    dists = [nx * x + ny * y - offset for x, y in vertices]
    if max(dists) <= 0.0:
        return poly, None
    if min(dists) >= 0.0:
        return None, poly

    inside: list[tuple[float, float]] = []
    outside: list[tuple[float, float]] = []
    prev = vertices[-1]
    dprev = dists[-1]
    for v, d in zip(vertices, dists):
        if (dprev < 0.0 < d) or (d < 0.0 < dprev):
            crossing = _crossing(prev, v, dprev, d)
            inside.append(crossing)
            outside.append(crossing)
        if d <= 0.0:
            inside.append(v)
        if d >= 0.0:
            outside.append(v)
        prev, dprev = v, d
    return _piece(inside), _piece(outside)


def _piece(vertices: list[tuple[float, float]]) -> ConvexPoly | None:
    if len(vertices) < 3:
        return None
    poly = ConvexPoly(vertices)
    return poly if poly.area > AREA_EPS else None


def clip_halfplane(poly: ConvexPoly, h: HalfPlane) -> ConvexPoly | None:
    """Intersect a convex polygon with one half-plane.

    Returns the input object unchanged when it lies inside ``h`` and None when
    the intersection has no area above AREA_EPS.
    """
    return split_halfplane(poly, h)[0]


def _crossing(a: tuple[float, float], b: tuple[float, float], da: float, db: float) -> Point:
    t = da / (da - db)
    return Point(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


@lru_cache(maxsize=32)
def _unit_directions(k: int) -> tuple[tuple[float, float], ...]:
    return tuple((math.cos(2.0 * math.pi * i / k), math.sin(2.0 * math.pi * i / k)) for i in range(k))


@lru_cache(maxsize=32)
def _unit_normals(k: int) -> np.ndarray:
    # edge i runs from vertex i-1 to vertex i
    angles = 2.0 * math.pi * (np.arange(k) - 0.5) / k
    normals = np.column_stack([np.cos(angles), np.sin(angles)])
    normals.setflags(write=False)
    return normals


def _check_disk(r: float, k: int, allow_coarse: bool) -> None:
    if not r > 0.0:
        raise NonPositiveRadius(f"disk radius must be positive, got {r}")
    if k < 3 or (k < MIN_DISK_VERTICES and not allow_coarse):
        raise InvalidResolution(f"disk polygon needs at least {MIN_DISK_VERTICES} vertices, got {k}")


def disk_polygon(
    center: tuple[float, float], r: float, k: int, *, allow_coarse: bool = False
) -> RegularPoly:
    """Regular k-gon circumscribing the disk of radius r (apothem exactly r).

    The polygon contains the disk, so subtracting it removes at least the disk.
    ``allow_coarse`` lifts the k >= 8 gate for tests of the construction.
    """
    _check_disk(r, k, allow_coarse)
    return RegularPoly(center, r, r / math.cos(math.pi / k), k)


def inscribed_polygon(center: tuple[float, float], r: float, k: int) -> RegularPoly:
    """Regular k-gon inscribed in the disk of radius r (circumradius exactly r)."""
    _check_disk(r, k, False)
    return RegularPoly(center, r * math.cos(math.pi / k), r, k)


def convex_difference(region: FreeRegion, p: ConvexPoly) -> FreeRegion:
    """Return ``region`` minus the convex polygon ``p`` as disjoint convex pieces.

    Each piece is tested against every edge line of ``p`` at once. A piece
    wholly outside one edge is kept and a piece inside every edge is dropped;
    otherwise only the edges whose lines cross it matter, and splitting along
    them in turn (outside of edge i, inside of the earlier ones) yields
    interior-disjoint pieces. The input object is returned when no piece is
    touched.
    """
    if region.is_empty:
        return region
    normals, offsets = p.plane_arrays
    pieces: list[ConvexPoly] = []
    touched = False

    for piece in region.pieces:
        relation = p.overlap(piece)
        if relation is Overlap.DISJOINT:
            pieces.append(piece)
            continue
        if relation is Overlap.INSIDE:
            touched = True
            continue

        slack = piece.vertex_array @ normals.T - offsets
        if (slack.min(axis=0) >= 0.0).any():
            pieces.append(piece)
            continue
        touched = True
        rest: ConvexPoly | None = piece
        for i in np.flatnonzero(slack.max(axis=0) > 0.0).tolist():
            plane = HalfPlane(float(normals[i, 0]), float(normals[i, 1]), float(offsets[i]))
            rest, outside = split_halfplane(rest, plane)
            if outside is not None:
                pieces.append(outside)
            if rest is None:
                break
        # anything left in rest lies inside p and is dropped

    if not touched:
        return region
    return FreeRegion(pieces)


def discard_within(region: FreeRegion, center: tuple[float, float], radius: float) -> FreeRegion:
    """Drop the pieces whose vertices all lie in the closed disk around ``center``."""
    r2 = radius * radius
    kept = [piece for piece in region.pieces if piece.max_dist2(center) > r2]
    if len(kept) == len(region.pieces):
        return region
    return FreeRegion(kept)


def region_area(region: FreeRegion) -> float:
    return region.area


def point_in_region(q: tuple[float, float], region: FreeRegion, tol: float = MEMBERSHIP_TOL) -> bool:
    return any(piece.contains(q, tol) for piece in region.pieces)


def region_mask(region: FreeRegion, xy: np.ndarray, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
    """Vectorised membership of an (m, 2) array of probes."""
    xy = np.asarray(xy, dtype=float)
    inside = np.zeros(len(xy), dtype=bool)
    for piece in region.pieces:
        normals, offsets = piece.plane_arrays
        slack = xy @ normals.T - offsets
        inside |= np.all(slack <= tol, axis=1)
    return inside


def sample_uniform(region: FreeRegion, rng: RngStream) -> Point:
    """Uniform point in the region: area-weighted fan triangle, then a
    reflected barycentric draw inside it."""
    if region.is_empty:
        raise EmptyRegion(f"cannot sample a region of area {region.area}")

    target = rng.uniform() * region.area
    chosen = region.pieces[-1]
    for piece in region.pieces:
        if target < piece.area:
            chosen = piece
            break
        target -= piece.area

    fan = chosen.fan
    _, a, b, c = fan[-1]
    for area, ta, tb, tc in fan:
        if target < area:
            a, b, c = ta, tb, tc
            break
        target -= area

    u = rng.uniform()
    v = rng.uniform()
    if u + v > 1.0:
        u, v = 1.0 - u, 1.0 - v
    x = a[0] + u * (b[0] - a[0]) + v * (c[0] - a[0])
    y = a[1] + u * (b[1] - a[1]) + v * (c[1] - a[1])
    return Point(min(max(x, 0.0), 1.0), min(max(y, 0.0), 1.0))
