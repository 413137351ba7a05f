"""Exception hierarchy shared by every module of the package."""


class PoissonDiskError(Exception):
    """Base class for all sampling errors."""


class NonPositiveRadius(PoissonDiskError, ValueError):
    """Raised when an exclusion radius is zero or negative."""


class InvalidResolution(PoissonDiskError, ValueError):
    """Raised when a disk polygon is requested with too few vertices."""


class EmptyRegion(PoissonDiskError):
    """Raised when sampling from a free region with no usable area."""


class DegenerateArea(PoissonDiskError, ValueError):
    """Raised when an arrival increment is requested for a vanishing area."""


class StaleBucketEntry(PoissonDiskError):
    """Raised when a popped bucket entry no longer refers to an active cell."""


class InvariantViolation(PoissonDiskError, AssertionError):
    """Raised by debug runs when a run-time invariant does not hold."""


class EmptyPattern(PoissonDiskError, ValueError):
    """Raised when statistics are requested for a pattern without points."""


class DegenerateHistogram(PoissonDiskError, ValueError):
    """Raised when a count histogram collapses to fewer than two bins."""


class PatternFormatError(PoissonDiskError, ValueError):
    """Raised when a pattern file cannot be parsed."""
