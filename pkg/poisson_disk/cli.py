"""Command-line entry point: generate, verify, compare and bench."""

import argparse
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Literal, Sequence

from pydantic import BaseModel, Field, PositiveFloat, ValidationError, model_validator

from poisson_disk import engine
from poisson_disk.engine import Pattern
from poisson_disk.errors import PoissonDiskError
from poisson_disk.formats import bench_frame, plot_bench, read_pattern, write_bench_csv, write_pattern
from poisson_disk.logging_setup import configure_logging
from poisson_disk.naive import DEFAULT_STOP_AFTER_REJECTIONS, NaiveConfig, naive_run
from poisson_disk.rng import derive_seed
from poisson_disk.settings import DEFAULT_K, Settings, load_settings
from poisson_disk.stats import (
    bench_radii,
    bench_sweep,
    compute_stats,
    density_constant,
    maximality_bound,
    maximality_probe,
    two_sample_count_test,
    two_sample_ks_test,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3

MIN_COMPARE_RUNS = 1000
FULL_RANGE_FLOOR = 0.004
RADIUS_REQUIRED = {"generate", "verify", "compare"}


class CliConfig(BaseModel):
    subcommand: Literal["generate", "verify", "compare", "bench"]
    radius: PositiveFloat | None = None
    k: int = Field(default=DEFAULT_K, ge=8)
    seed: int = 0
    method: Literal["engine", "naive"] = "engine"
    out_path: Path | None = None
    input_path: Path | None = None
    format: Literal["csv", "json", "svg"] = "csv"
    runs: int = Field(default=5000, ge=1)
    stop_after_rejections: int = Field(default=DEFAULT_STOP_AFTER_REJECTIONS, ge=1)
    naive_inflate: PositiveFloat = 1.0
    alpha: float = Field(default=0.01, gt=0, lt=1)
    probes: int = Field(default=1000, ge=100)
    floor: PositiveFloat = 0.01
    full_range: bool = False
    workers: int = Field(default=1, ge=1)
    debug: bool = False

    @model_validator(mode="after")
    def _radius_for_sampling_commands(self) -> "CliConfig":
        if self.subcommand in RADIUS_REQUIRED and self.radius is None:
            raise ValueError(f"--radius is required for {self.subcommand}")
        return self


def build_parser(settings: Settings) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, default=settings.k, help="vertices of the exclusion polygon")
    common.add_argument("--seed", type=int, default=0)

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--radius", type=float, required=True, help="exclusion radius in unit-square units")

    parser = argparse.ArgumentParser(
        prog="poisson-disk",
        description="Maximal Poisson-disk patterns on the unit square in linear time.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    generate = sub.add_parser("generate", parents=[common, sampling], help="sample one pattern")
    generate.add_argument("--method", choices=["engine", "naive"], default="engine")
    generate.add_argument("--format", choices=["csv", "json", "svg"], default="csv")
    generate.add_argument("--out", dest="out_path", type=Path, help="output file (default pattern.<format>)")
    generate.add_argument("--stop-after-rejections", type=int, default=DEFAULT_STOP_AFTER_REJECTIONS)
    generate.add_argument("--debug", action="store_true", help="check run-time invariants after every acceptance")

    verify = sub.add_parser("verify", parents=[common, sampling], help="check spacing and maximality")
    verify.add_argument("--input", dest="input_path", type=Path, help="pattern file (.csv or .json); sampled when omitted")
    verify.add_argument("--probes", type=int, default=1000, help="probe lattice side")

    compare = sub.add_parser("compare", parents=[common, sampling], help="engine against dart throwing")
    compare.add_argument("--runs", type=int, default=5000)
    compare.add_argument("--stop-after-rejections", type=int, default=DEFAULT_STOP_AFTER_REJECTIONS)
    compare.add_argument("--naive-inflate", type=float, default=1.0, help="scale the dart-throwing radius")
    compare.add_argument("--alpha", type=float, default=0.01)
    compare.add_argument("--workers", type=int, default=settings.workers)

    bench = sub.add_parser("bench", parents=[common], help="throughput over the radius sweep")
    bench.add_argument("--out", dest="out_path", type=Path, help="CSV table (default bench.csv); plot next to it")
    bench.add_argument("--floor", type=float, default=0.01, help="smallest radius of the sweep")
    bench.add_argument("--full-range", action="store_true", help=f"extend the sweep to r = {FULL_RANGE_FLOOR}")
    return parser


def _sample(cfg: CliConfig, seed: int) -> Pattern:
    if cfg.method == "naive":
        return naive_run(NaiveConfig(r=cfg.radius, seed=seed, stop_after_rejections=cfg.stop_after_rejections))
    return engine.run(cfg.radius, cfg.k, seed, check_invariants=cfg.debug)


def cmd_generate(cfg: CliConfig) -> int:
    pattern = _sample(cfg, cfg.seed)
    out = cfg.out_path or Path(f"pattern.{cfg.format}")
    write_pattern(pattern, out, cfg.format)
    n = len(pattern)
    print(f"N={n}")
    print(f"density_const={density_constant(pattern.radius, n):.6f}")
    print(f"generated_over_accepted={pattern.generated_count / n:.6f}")
    logger.info("wrote %d points to %s", n, out)
    return EXIT_OK


def cmd_verify(cfg: CliConfig) -> int:
    if cfg.input_path is not None:
        pattern = read_pattern(cfg.input_path, cfg.radius, cfg.k)
    else:
        pattern = engine.run(cfg.radius, cfg.k, cfg.seed)
    bound = maximality_bound(pattern)
    stats = compute_stats(pattern)
    gap = maximality_probe(pattern, bound, cfg.probes)

    print(f"min_pair_dist={stats.min_pair_dist if stats.min_pair_dist is not None else 'absent'}")
    print(f"worst_gap={gap.worst_gap!r} bound={bound!r}")
    status = EXIT_OK
    if stats.min_pair_dist is not None and stats.min_pair_dist < cfg.radius:
        i, j = stats.closest_pair
        a, b = pattern.samples[i], pattern.samples[j]
        print(f"VIOLATION spacing: points {i} ({a.x!r}, {a.y!r}) and {j} ({b.x!r}, {b.y!r}) are {stats.min_pair_dist!r} apart")
        status = EXIT_FAILURE
    if not gap.maximal:
        print(f"VIOLATION maximality: probe {gap.worst_probe} is {gap.worst_gap!r} from the pattern")
        status = EXIT_FAILURE
    return status


def _batch(cfg: CliConfig, sample) -> list[Pattern]:
    seeds = [derive_seed(cfg.seed, i) for i in range(cfg.runs)]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(sample, seeds))


def cmd_compare(cfg: CliConfig) -> int:
    if cfg.runs < MIN_COMPARE_RUNS:
        logger.error("compare needs at least %d runs, got %d", MIN_COMPARE_RUNS, cfg.runs)
        return EXIT_USAGE
    naive_r = cfg.radius * cfg.naive_inflate
    engine_runs = _batch(cfg, lambda seed: engine.run(cfg.radius, cfg.k, seed))
    naive_runs = _batch(
        cfg,
        lambda seed: naive_run(NaiveConfig(r=naive_r, seed=seed, stop_after_rejections=cfg.stop_after_rejections)),
    )

    counts = two_sample_count_test([len(p) for p in engine_runs], [len(p) for p in naive_runs])
    spacing = two_sample_ks_test(_pooled_nn(engine_runs), _pooled_nn(naive_runs))
    print(f"count_chi_square={counts.statistic:.6g} dof={counts.dof} p={counts.pvalue:.6g}")
    print(f"nn_ks={spacing.statistic:.6g} p={spacing.pvalue:.6g}")
    if counts.pvalue > cfg.alpha and spacing.pvalue > cfg.alpha:
        return EXIT_OK
    logger.warning("engine and dart throwing differ at alpha=%g", cfg.alpha)
    return EXIT_FAILURE


def _pooled_nn(patterns: Sequence[Pattern]) -> list[float]:
    pooled: list[float] = []
    for pattern in patterns:
        if len(pattern) > 1:
            pooled.extend(compute_stats(pattern).nn_distances)
    return pooled


def cmd_bench(cfg: CliConfig) -> int:
    floor = FULL_RANGE_FLOOR if cfg.full_range else cfg.floor
    records = bench_sweep(bench_radii(floor=floor), cfg.k, cfg.seed)
    out = cfg.out_path or Path("bench.csv")
    write_bench_csv(records, out)
    plot_bench(records, out.with_suffix(".svg"))
    print(bench_frame(records).to_string(index=False))
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "verify": cmd_verify,
    "compare": cmd_compare,
    "bench": cmd_bench,
}


def main(argv: Sequence[str] | None = None) -> int:
    settings = load_settings()
    configure_logging(settings)
    args = build_parser(settings).parse_args(argv)
    try:
        cfg = CliConfig(**vars(args))
    except ValidationError as e:
        logging.error("invalid arguments: %s", e)
        return EXIT_USAGE
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except OSError as e:
        logging.error("I/O failure: %s", e)
        return EXIT_IO
    except (PoissonDiskError, ValueError) as e:
        logging.error("%s: %s", type(e).__name__, e)
        return EXIT_USAGE
