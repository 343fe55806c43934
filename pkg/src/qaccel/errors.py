"""Exception types shared across the package."""


class QaccelError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(QaccelError):
    """Operator/state dimensions are incompatible or below the minimum."""


class HermiticityError(QaccelError):
    """A matrix fails the Hermiticity check, or an expectation value that
    must be real carries a non-negligible imaginary part."""


class AntiHermiticityError(QaccelError):
    """A commutator expectation that must be purely imaginary carries a
    non-negligible real part."""


class NormError(QaccelError):
    """A vector that must have unit norm does not."""


class StepError(QaccelError):
    """Invalid time-stepping request (non-positive step, empty or reversed
    interval, step larger than the interval)."""


class DegenerateSpeedError(QaccelError):
    """The energy uncertainty is numerically zero, so quantities that divide
    by it (acceleration, tightened bound) are undefined."""


class ConfigError(QaccelError):
    """Invalid run configuration (unknown scenario, bad grid, bad key)."""
