"""Pattern statistics, maximality probing, two-sample tests and benchmarking."""

import logging
import math
import time
from typing import NamedTuple, Sequence

import numpy as np
from pydantic import BaseModel, computed_field
from scipy.spatial import cKDTree
from scipy.special import kolmogorov
from scipy.stats import chi2

from poisson_disk import engine
from poisson_disk.engine import Pattern
from poisson_disk.errors import DegenerateHistogram, EmptyPattern
from poisson_disk.settings import DEFAULT_K

logger = logging.getLogger(__name__)

MIN_TEST_SAMPLES = 1000
MIN_EXPECTED_COUNT = 5.0
BRUTE_FORCE_CHUNK = 512


class PatternStats(BaseModel):
    n_points: int
    radius: float
    min_pair_dist: float | None
    closest_pair: tuple[int, int] | None
    density_const: float
    nn_distances: list[float]
    generated_over_accepted: float


class GapReport(NamedTuple):
    worst_gap: float
    worst_probe: tuple[float, float]
    maximal: bool


class TwoSampleResult(NamedTuple):
    statistic: float
    pvalue: float
    dof: int | None = None


class BenchRecord(BaseModel):
    r: float
    n_accepted: int
    n_generated: int
    wall_seconds: float

    @computed_field
    @property
    def samples_per_second(self) -> float:
        return self.n_accepted / self.wall_seconds if self.wall_seconds > 0 else math.inf

    @property
    def generated_over_accepted(self) -> float:
        return self.n_generated / self.n_accepted

    @property
    def seconds_per_sample(self) -> float:
        return self.wall_seconds / self.n_accepted


def density_constant(radius: float, n_points: int) -> float:
    return math.pi * radius * radius * n_points / 4.0


def nearest_neighbors_brute_force(xy: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Exact nearest-neighbour distance and index for every point, in row chunks."""
    count = len(xy)
    dist = np.empty(count)
    index = np.empty(count, dtype=np.int64)
    for start in range(0, count, BRUTE_FORCE_CHUNK):
        block = xy[start : start + BRUTE_FORCE_CHUNK]
        d2 = ((block[:, None, :] - xy[None, :, :]) ** 2).sum(axis=-1)
        rows = np.arange(len(block))
        d2[rows, start + rows] = np.inf
        nearest = d2.argmin(axis=1)
        index[start : start + len(block)] = nearest
        dist[start : start + len(block)] = np.sqrt(d2[rows, nearest])
    return dist, index


def nearest_neighbor_distances_kdtree(xy: np.ndarray) -> np.ndarray:
    dist, _ = cKDTree(xy).query(xy, k=2)
    return dist[:, 1]


def compute_stats(pattern: Pattern) -> PatternStats:
    if len(pattern) == 0:
        raise EmptyPattern("statistics need at least one point")
    xy = pattern.coords()
    n_points = len(xy)
    if n_points == 1:
        min_dist, pair, nn = None, None, []
    else:
        dist, index = nearest_neighbors_brute_force(xy)
        first = int(dist.argmin())
        second = int(index[first])
        min_dist = float(dist[first])
        pair = (min(first, second), max(first, second))
        nn = np.sort(dist).tolist()
    return PatternStats(
        n_points=n_points,
        radius=pattern.radius,
        min_pair_dist=min_dist,
        closest_pair=pair,
        density_const=density_constant(pattern.radius, n_points),
        nn_distances=nn,
        generated_over_accepted=pattern.generated_count / n_points,
    )


def maximality_bound(pattern: Pattern) -> float:
    """Largest gap a maximal pattern may leave: r for dart throwing, the
    exclusion polygon reach for everything else."""
    return pattern.params.r if pattern.method == "naive" else pattern.params.reach


def maximality_probe(pattern: Pattern, radius: float, m: int = 1000) -> GapReport:
    """Largest distance from an m x m probe lattice (corners included) to the pattern."""
    if m < 100:
        raise ValueError(f"probe lattice needs m >= 100, got {m}")
    if len(pattern) == 0:
        raise EmptyPattern("cannot probe an empty pattern")
    ticks = np.linspace(0.0, 1.0, m)
    gx, gy = np.meshgrid(ticks, ticks, indexing="ij")
    probes = np.column_stack([gx.ravel(), gy.ravel()])
    dist, _ = cKDTree(pattern.coords()).query(probes)
    worst = int(dist.argmax())
    report = GapReport(float(dist[worst]), (float(probes[worst, 0]), float(probes[worst, 1])), bool(dist[worst] <= radius))
    if not report.maximal:
        logger.debug("gap %.6g at %s exceeds %.6g", report.worst_gap, report.worst_probe, radius)
    return report


def _merged_count_table(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """2 x K table of counts per value, adjacent values merged until every
    expected cell count reaches MIN_EXPECTED_COUNT."""
    values = np.union1d(a, b)
    counts_a = np.array([np.count_nonzero(a == v) for v in values], dtype=float)
    counts_b = np.array([np.count_nonzero(b == v) for v in values], dtype=float)
    share_a = len(a) / (len(a) + len(b))
    share_b = 1.0 - share_a

    bins: list[list[float]] = []
    acc_a = acc_b = 0.0
    for ca, cb in zip(counts_a, counts_b):
        acc_a += ca
        acc_b += cb
        pooled = acc_a + acc_b
        if pooled * share_a >= MIN_EXPECTED_COUNT and pooled * share_b >= MIN_EXPECTED_COUNT:
            bins.append([acc_a, acc_b])
            acc_a = acc_b = 0.0
    if acc_a or acc_b:
        if bins:
            bins[-1][0] += acc_a
            bins[-1][1] += acc_b
        else:
            bins.append([acc_a, acc_b])
    return np.array(bins).T


def chi_square_statistic(a: Sequence[int], b: Sequence[int]) -> TwoSampleResult:
    """Chi-square homogeneity statistic for two samples of integer counts."""
    table = _merged_count_table(np.asarray(a), np.asarray(b))
    if table.shape[1] < 2:
        raise DegenerateHistogram(f"only {table.shape[1]} bin(s) left after merging")
    expected = table.sum(axis=1, keepdims=True) * table.sum(axis=0, keepdims=True) / table.sum()
    statistic = float(((table - expected) ** 2 / expected).sum())
    dof = table.shape[1] - 1
    return TwoSampleResult(statistic, float(chi2.sf(statistic, dof)), dof)


def ks_statistic(a: Sequence[float], b: Sequence[float]) -> float:
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    pooled = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, pooled, side="right") / len(a)
    cdf_b = np.searchsorted(b, pooled, side="right") / len(b)
    return float(np.max(np.abs(cdf_a - cdf_b)))


def _require_sizes(a: Sequence, b: Sequence, min_size: int) -> None:
    if len(a) < min_size or len(b) < min_size:
        raise ValueError(f"two-sample tests need at least {min_size} observations per sample, got {len(a)} and {len(b)}")


def two_sample_count_test(a: Sequence[int], b: Sequence[int], *, min_size: int = MIN_TEST_SAMPLES) -> TwoSampleResult:
    _require_sizes(a, b, min_size)
    return chi_square_statistic(a, b)


def two_sample_ks_test(a: Sequence[float], b: Sequence[float], *, min_size: int = MIN_TEST_SAMPLES) -> TwoSampleResult:
    """Two-sided two-sample Kolmogorov-Smirnov test with the asymptotic p-value."""
    _require_sizes(a, b, min_size)
    d = ks_statistic(a, b)
    en = math.sqrt(len(a) * len(b) / (len(a) + len(b)))
    pvalue = float(min(1.0, kolmogorov((en + 0.12 + 0.11 / en) * d)))
    return TwoSampleResult(d, pvalue)


def bench_radii(start: float = 0.64, ratio: float = 0.8, floor: float = 0.01) -> list[float]:
    """Geometric radius schedule from ``start`` down to (not below) ``floor``."""
    radii = []
    r = start
    while r >= floor * (1.0 - 1e-9):
        radii.append(r)
        r *= ratio
    return radii


def bench_sweep(radii: Sequence[float], k: int = DEFAULT_K, seed: int = 0) -> list[BenchRecord]:
    """Time one engine run per radius, serially."""
    records = []
    for r in radii:
        started = time.perf_counter()
        pattern = engine.run(r, k, seed)
        elapsed = time.perf_counter() - started
        record = BenchRecord(r=r, n_accepted=len(pattern), n_generated=pattern.generated_count, wall_seconds=elapsed)
        logger.info(
            "r=%.5g N=%d generated=%d %.0f samples/s",
            r,
            record.n_accepted,
            record.n_generated,
            record.samples_per_second,
        )
        records.append(record)
    return records
