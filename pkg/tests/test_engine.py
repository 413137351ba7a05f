import math

import numpy as np
import pytest

from helpers import brute_min_distance
from poisson_disk import engine
from poisson_disk.engine import (
    Bucket,
    PatternBuilder,
    PoissonDiskSampler,
    accept,
    build_initial_bucket,
    is_locally_early,
    is_covered,
    iter_samples,
    redraw,
    run,
)
from poisson_disk.errors import InvariantViolation, NonPositiveRadius, StaleBucketEntry
from poisson_disk.geom import FreeRegion, Point, point_in_region
from poisson_disk.grid import CellState, init_grid
from poisson_disk.rng import RngStream
from poisson_disk.stats import maximality_probe


def two_cell_grid():
    """r = 0.5 grid with only cells (0, 0) and (1, 0) still active."""
    grid = init_grid(0.5, 64, RngStream(0))
    for cell in grid:
        if cell.index not in {(0, 0), (1, 0)}:
            cell.state = CellState.EXHAUSTED
    grid[0, 0].candidate = Point(0.3, 0.15)
    grid[1, 0].candidate = Point(0.4, 0.15)
    for index in [(0, 0), (1, 0)]:
        grid[index].neighbors = grid.neighbor_cells(grid[index].candidate)
    grid[0, 0].t = 0.1
    grid[1, 0].t = 0.2
    return grid


class TestLocallyEarly:
    def test_single_cell(self):
        grid = init_grid(1.5, 64, RngStream(0))
        assert is_locally_early((0, 0), grid)

    def test_earlier_neighbor_wins(self):
        grid = two_cell_grid()
        assert is_locally_early((0, 0), grid)
        assert not is_locally_early((1, 0), grid)

    def test_accepted_neighbors_are_ignored(self):
        grid = two_cell_grid()
        grid[0, 0].state = CellState.ACCEPTED
        assert is_locally_early((1, 0), grid)

    def test_tie_goes_to_smaller_index(self):
        grid = two_cell_grid()
        grid[1, 0].t = grid[0, 0].t
        assert is_locally_early((0, 0), grid)
        assert not is_locally_early((1, 0), grid)


class TestInitialBucket:
    def test_single_cell(self):
        grid = init_grid(1.5, 64, RngStream(3))
        assert list(build_initial_bucket(grid)) == [(0, 0)]

    def test_one_neighborhood_keeps_only_the_minimum(self):
        grid = init_grid(0.5, 64, RngStream(4))
        for cell in grid:
            x0, y0, x1, y1 = grid.bounds(cell.index)
            cell.candidate = Point(min(max(0.5, x0 + 1e-3), x1 - 1e-3), min(max(0.5, y0 + 1e-3), y1 - 1e-3))
            cell.neighbors = grid.neighbor_cells(cell.candidate)
            assert len(cell.neighbors) == 9
        earliest = min(grid, key=lambda c: c.t).index
        assert list(build_initial_bucket(grid)) == [earliest]

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_independent_scan(self, seed):
        grid = init_grid(0.1, 64, RngStream(seed))
        bucket = build_initial_bucket(grid)
        assert len(bucket) > 0

        n = grid.n
        radius = grid.params.exclusion_radius
        lo = np.arange(n) / n
        hi = (np.arange(n) + 1) / n
        times = np.array([[grid[i, j].t for j in range(n)] for i in range(n)])
        expected = set()
        for cell in grid:
            x, y = cell.candidate
            dx = np.maximum(np.maximum(lo - x, x - hi), 0.0)
            dy = np.maximum(np.maximum(lo - y, y - hi), 0.0)
            near = dx[:, None] ** 2 + dy[None, :] ** 2 <= radius * radius
            if times[near].min() == cell.t:
                expected.add(cell.index)
        assert set(bucket) == expected
        assert all(is_locally_early(c, grid) for c in bucket)


class TestAccept:
    def test_single_cell_run(self):
        grid = init_grid(1.5, 64, RngStream(0))
        bucket = build_initial_bucket(grid)
        builder = PatternBuilder(generated_count=1)
        accept(bucket.pop(), grid, bucket, builder, RngStream(1))
        assert len(builder.samples) == 1
        assert not bucket
        assert grid[0, 0].state is CellState.ACCEPTED

    def test_rejects_an_accepted_cell(self):
        sampler = PoissonDiskSampler(0.2, seed=1)
        c = sampler.bucket.pop()
        accept(c, sampler.grid, sampler.bucket, sampler.pattern, sampler.rng)
        with pytest.raises(StaleBucketEntry):
            accept(c, sampler.grid, sampler.bucket, sampler.pattern, sampler.rng)

    def test_neighbors_lose_the_exclusion_polygon(self):
        sampler = PoissonDiskSampler(0.1, seed=2)
        sample = sampler.step()
        for index in sampler.grid.neighbor_cells(sample.point):
            cell = sampler.grid[index]
            if cell.is_active:
                assert math.dist(cell.candidate, sample.point) > sampler.params.r
                assert cell.t > 0


class TestExactDisks:
    def test_free_region_keeps_corners_of_the_circumscribed_polygon(self):
        sampler = PoissonDiskSampler(0.2, seed=5)
        sample = sampler.step()
        grid, params = sampler.grid, sampler.params
        between = (params.r + params.reach) / 2
        found = 0
        for i in range(params.k):
            angle = 2 * math.pi * i / params.k
            q = Point(sample.x + between * math.cos(angle), sample.y + between * math.sin(angle))
            if not (0.0 < q.x < 1.0 and 0.0 < q.y < 1.0):
                continue
            cell = grid[grid.cell_of(q)]
            x0, y0, x1, y1 = grid.bounds(cell.index)
            if not cell.is_active or min(q.x - x0, x1 - q.x, q.y - y0, y1 - q.y) < 0.01:
                continue
            assert point_in_region(q, cell.region)
            found += 1
        assert found > 0

    def test_redraw_discards_draws_inside_disks(self):
        sampler = PoissonDiskSampler(0.2, seed=5)
        sample = sampler.step()
        grid, r = sampler.grid, sampler.params.r
        generated = sampler.pattern.generated_count
        redraws = 0
        for index in grid.neighbor_cells(sample.point):
            cell = grid[index]
            x0, y0, x1, y1 = grid.bounds(index)
            corners = [(x0, y0), (x1, y0), (x0, y1), (x1, y1)]
            if not cell.is_active or max(math.dist(sample.point, q) for q in corners) < 1.2 * r:
                continue
            cell.region = FreeRegion.from_box(x0, y0, x1, y1)
            for _ in range(50):
                t = cell.t
                assert redraw(cell, grid, sampler.pattern, sampler.rng)
                assert math.dist(cell.candidate, sample.point) >= r
                assert cell.t > t
                redraws += 1
        assert redraws > 0
        assert sampler.pattern.generated_count - generated > redraws

    def test_cover_uses_circumscribed_polygons(self):
        sampler = PoissonDiskSampler(0.2, seed=5)
        sample = sampler.step()
        grid, params = sampler.grid, sampler.params
        side = -1.0 if sample.x > 0.5 else 1.0
        h = 1e-5

        def box_at(distance):
            x = sample.x + side * distance
            return grid.cell_of((x, sample.y)), FreeRegion.from_box(x - h, sample.y - h, x + h, sample.y + h)

        index, corner = box_at((params.r + params.reach) / 2)
        assert is_covered(index, corner, grid)
        index, outside = box_at(1.3 * params.r)
        assert not is_covered(index, outside, grid)


class TestRun:
    @pytest.mark.parametrize("seed", range(20))
    def test_huge_radius_gives_one_point(self, seed):
        pattern = run(1.5, seed=seed)
        assert len(pattern) == 1
        assert pattern.generated_count == 1

    @pytest.mark.parametrize("r", [0.2, 0.1, 0.05])
    def test_spacing_and_maximality(self, r):
        for seed in range(3):
            pattern = run(r, seed=seed)
            assert brute_min_distance(pattern) >= r
            assert maximality_probe(pattern, pattern.params.reach).maximal

    def test_one_point_per_cell_inside_the_square(self):
        sampler = PoissonDiskSampler(0.05, seed=6)
        pattern = sampler.run()
        cells = {sampler.grid.cell_of(p) for p in pattern.points}
        assert len(cells) == len(pattern)
        xy = pattern.coords()
        assert xy.min() >= 0.0 and xy.max() <= 1.0

    def test_deterministic(self):
        assert run(0.1, seed=3).samples == run(0.1, seed=3).samples
        assert run(0.1, seed=3).samples != run(0.1, seed=4).samples

    def test_iterator_matches_run(self):
        assert tuple(iter_samples(0.1, seed=8)) == run(0.1, seed=8).samples

    def test_generated_count(self):
        pattern = run(0.1, seed=9)
        assert pattern.generated_count >= pattern.params.n**2
        assert pattern.generated_count >= len(pattern)

    def test_bad_radius(self):
        with pytest.raises(NonPositiveRadius):
            run(0.0)

    @pytest.mark.parametrize("r", [0.35, 0.1, 0.05])
    def test_bounded_work_per_acceptance(self, r):
        for seed in range(3):
            sampler = PoissonDiskSampler(r, seed=seed)
            sampler.run()
            assert sampler.max_visits_per_accept <= 200

    def test_rng_stream_reexported(self):
        assert engine.RngStream is RngStream


class TestInvariants:
    @pytest.mark.parametrize("seed", range(50))
    def test_checked_runs_at_coarse_radius(self, seed):
        run(0.35, seed=seed, check_invariants=True)

    @pytest.mark.parametrize("r", [0.1, 0.05])
    def test_checked_runs(self, r):
        run(r, seed=1, check_invariants=True)

    def test_acceptance_order_is_time_order_within_neighborhoods(self):
        sampler = PoissonDiskSampler(0.1, seed=11)
        samples = sampler.run().samples
        grid = sampler.grid
        for i, sample in enumerate(samples):
            near = set(grid.neighbor_cells(sample.point))
            for later in samples[i + 1 :]:
                if grid.cell_of(later.point) in near:
                    assert later.t >= sample.t

    def test_monitor_catches_time_going_backwards(self):
        sampler = PoissonDiskSampler(0.2, seed=1, check_invariants=True)
        sampler.step()
        sampler.grid.active_cells()[0].t = -1.0
        with pytest.raises(InvariantViolation, match="arrival time"):
            sampler.monitor.check()

    def test_monitor_catches_stale_bucket_entries(self):
        sampler = PoissonDiskSampler(0.2, seed=1, check_invariants=True)
        queued = next(iter(sampler.bucket))
        sampler.grid[queued].state = CellState.EXHAUSTED
        with pytest.raises(InvariantViolation, match="stale"):
            sampler.monitor.check()

    def test_terminal_check(self):
        sampler = PoissonDiskSampler(0.2, seed=1)
        sampler.bucket = Bucket(sampler.grid)
        for cell in sampler.grid:
            cell.in_bucket = False
        with pytest.raises(InvariantViolation):
            list(sampler)
