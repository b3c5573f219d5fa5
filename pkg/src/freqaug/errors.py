"""Exception types shared across the package."""


class FreqAugError(Exception):
    """Base class for every error raised by this package."""


class InvalidShapeError(FreqAugError, ValueError):
    """A tensor shape violates a documented constraint."""


class InvalidValueError(FreqAugError, ValueError):
    """Tensor values violate a documented constraint (range, finiteness)."""


class DimensionMismatchError(FreqAugError, ValueError):
    """Two operands have incompatible shapes."""


class SymmetryViolationError(FreqAugError, ValueError):
    """An inverse transform produced a non-negligible imaginary part.

    Signals a frequency mask that is not symmetric under per-axis
    frequency negation, or a corrupted spectrum.
    """


class ConfigError(FreqAugError, ValueError):
    """Invalid or inconsistent configuration."""


class SamplingError(FreqAugError, ValueError):
    """A frame sampling window does not fit the available frames."""


class ClipIOError(FreqAugError, OSError):
    """Reading or writing clip data failed."""


class UndefinedStatisticError(FreqAugError, ValueError):
    """The requested statistic is undefined for the given input."""
