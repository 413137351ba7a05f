"""Linear-time maximal Poisson-disk sampling on the unit square."""

from poisson_disk.engine import Pattern, PoissonDiskSampler, Sample, iter_samples, run
from poisson_disk.errors import PoissonDiskError
from poisson_disk.naive import NaiveConfig, naive_run

__all__ = [
    "NaiveConfig",
    "Pattern",
    "PoissonDiskError",
    "PoissonDiskSampler",
    "Sample",
    "iter_samples",
    "naive_run",
    "run",
]
