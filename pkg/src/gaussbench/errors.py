"""Exception types shared across the package."""


class GaussBenchError(Exception):
    """Base class for all package-specific errors."""


class UnphysicalStateError(GaussBenchError):
    """A covariance matrix violates the uncertainty bound or positivity."""


class UnphysicalMeasurementError(GaussBenchError):
    """A measured variance fell below the vacuum-noise floor for the given efficiency."""


class NumericalDomainError(GaussBenchError):
    """An intermediate radicand or argument left its mathematically allowed domain."""


class NotSymmetricError(GaussBenchError):
    """An operation defined only for symmetric (I1 == I2) states received a general one."""


class ReconstructionError(GaussBenchError):
    """A measurement transcript could not be turned into a consistent invariant set."""


class ConfigError(GaussBenchError):
    """Invalid command-line or config-file input."""
