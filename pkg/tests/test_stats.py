import math

import numpy as np
import pytest

from helpers import make_pattern
from poisson_disk.engine import run
from poisson_disk.errors import DegenerateHistogram, EmptyPattern
from poisson_disk.stats import (
    BenchRecord,
    bench_radii,
    bench_sweep,
    chi_square_statistic,
    compute_stats,
    density_constant,
    ks_statistic,
    maximality_bound,
    maximality_probe,
    nearest_neighbor_distances_kdtree,
    nearest_neighbors_brute_force,
    two_sample_count_test,
    two_sample_ks_test,
)


class TestComputeStats:
    def test_single_point(self):
        stats = compute_stats(make_pattern([(0.5, 0.5)], 0.1))
        assert stats.min_pair_dist is None
        assert stats.closest_pair is None
        assert stats.nn_distances == []
        assert stats.density_const == pytest.approx(math.pi * 0.01 / 4)

    def test_two_points(self):
        stats = compute_stats(make_pattern([(0.2, 0.5), (0.7, 0.5)], 0.1))
        assert stats.min_pair_dist == pytest.approx(0.5)
        assert stats.closest_pair == (0, 1)
        assert stats.nn_distances == pytest.approx([0.5, 0.5])

    def test_empty(self):
        with pytest.raises(EmptyPattern):
            compute_stats(make_pattern([], 0.1))

    def test_generated_ratio(self):
        pattern = run(0.1, seed=5)
        stats = compute_stats(pattern)
        assert stats.generated_over_accepted == pytest.approx(pattern.generated_count / len(pattern))
        assert stats.generated_over_accepted >= 1.0

    def test_brute_force_matches_kdtree(self):
        xy = np.random.default_rng(6).random((3000, 2))
        dist, index = nearest_neighbors_brute_force(xy)
        assert dist == pytest.approx(nearest_neighbor_distances_kdtree(xy), rel=1e-12)
        assert np.allclose(np.hypot(*(xy - xy[index]).T), dist)

    def test_density_constant(self):
        assert density_constant(0.01, 6977) == pytest.approx(0.548, abs=1e-3)


class TestMaximalityProbe:
    def test_single_center_point(self):
        report = maximality_probe(make_pattern([(0.5, 0.5)], 0.1), 0.1, m=1000)
        assert report.worst_gap == pytest.approx(math.sqrt(2) / 2)
        assert report.worst_probe in {(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)}
        assert not report.maximal

    def test_engine_output_is_maximal(self):
        pattern = run(0.1, seed=7)
        report = maximality_probe(pattern, pattern.params.reach, m=500)
        assert report.maximal
        assert report.worst_gap <= 0.1 / math.cos(math.pi / 64) * (1 + 1e-9)

    @pytest.mark.parametrize("method", ["engine", "file"])
    def test_bound_is_reach_for_polygon_patterns(self, method):
        pattern = make_pattern([(0.5, 0.5)], 0.1, method)
        assert maximality_bound(pattern) == pattern.params.reach

    def test_bound_is_r_for_dart_throwing(self):
        assert maximality_bound(make_pattern([(0.5, 0.5)], 0.1, "naive")) == 0.1

    def test_small_lattice_rejected(self):
        with pytest.raises(ValueError):
            maximality_probe(make_pattern([(0.5, 0.5)], 0.1), 0.1, m=50)


class TestCountTest:
    def test_identical_lists(self):
        counts = list(np.random.default_rng(1).integers(10, 20, size=2000))
        result = two_sample_count_test(counts, counts)
        assert result.statistic == pytest.approx(0.0)
        assert result.pvalue == pytest.approx(1.0)

    def test_disjoint_constants(self):
        result = two_sample_count_test([3] * 1000, [7] * 1000)
        assert result.pvalue < 1e-6

    def test_hand_computed_table(self):
        result = chi_square_statistic([0] * 10 + [1] * 10, [0] * 15 + [1] * 5)
        assert result.statistic == pytest.approx(8.0 / 3.0)
        assert result.dof == 1

    def test_sparse_values_are_merged(self):
        a = [0] * 500 + [1] * 497 + [2, 3, 4]
        b = [0] * 501 + [1] * 498 + [9]
        result = chi_square_statistic(a, b)
        assert result.dof == 1

    def test_single_bin(self):
        with pytest.raises(DegenerateHistogram):
            chi_square_statistic([4] * 50, [4] * 50)

    def test_too_few_runs(self):
        with pytest.raises(ValueError):
            two_sample_count_test([1] * 10, [1] * 10)


class TestKsTest:
    def test_hand_computed_statistic(self):
        assert ks_statistic([1, 2, 3], [2, 3, 4]) == pytest.approx(1 / 3)
        assert ks_statistic([1, 2, 3], [4, 5, 6]) == pytest.approx(1.0)

    def test_identical_samples(self):
        sample = np.random.default_rng(2).random(5000)
        result = two_sample_ks_test(sample, sample)
        assert result.statistic == 0.0
        assert result.pvalue == 1.0

    def test_shifted_uniforms(self):
        gen = np.random.default_rng(3)
        result = two_sample_ks_test(gen.random(10_000), gen.random(10_000) + 0.5)
        assert result.pvalue < 1e-6

    def test_same_distribution(self):
        gen = np.random.default_rng(4)
        result = two_sample_ks_test(gen.random(5000), gen.random(5000))
        assert result.pvalue > 1e-4

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            two_sample_ks_test([0.1] * 10, [0.2] * 10)


class TestBench:
    def test_default_radii(self):
        radii = bench_radii()
        assert radii[0] == 0.64
        assert len(radii) == 19
        assert radii[-1] >= 0.01
        assert all(b / a == pytest.approx(0.8) for a, b in zip(radii, radii[1:]))

    def test_full_range(self):
        radii = bench_radii(floor=0.004)
        assert len(radii) == 23
        assert radii[-1] == pytest.approx(0.64 * 0.8**22)

    def test_sweep_records(self):
        records = bench_sweep([0.64, 0.2, 0.1], seed=3)
        assert [r.r for r in records] == [0.64, 0.2, 0.1]
        for record in records:
            assert record.n_generated >= record.n_accepted >= 1
            assert record.samples_per_second == pytest.approx(record.n_accepted / record.wall_seconds)
        assert records[2].n_accepted > records[1].n_accepted

    def test_record_ratios(self):
        record = BenchRecord(r=0.1, n_accepted=200, n_generated=500, wall_seconds=0.5)
        assert record.samples_per_second == 400.0
        assert record.generated_over_accepted == 2.5
        assert record.seconds_per_sample == 0.0025
        assert "samples_per_second" in record.model_dump()
