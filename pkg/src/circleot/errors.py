"""Exception types raised across the package."""


class CircleOtError(Exception):
    """Base class for all package-specific errors."""


class EmptyHistogram(CircleOtError):
    """Histogram construction received no atoms."""


class NonPositiveMass(CircleOtError):
    """A histogram mass was zero or negative."""


class MassSumMismatch(CircleOtError):
    """Masses do not sum to one (or fail the declared-denominator integer check)."""


class UnknownGrowth(CircleOtError):
    """No growth radius is available for this cost."""


class UnknownBracket(CircleOtError):
    """No search bracket can be produced for this cost."""


class InvalidEpsilon(CircleOtError):
    """The requested tolerance is not a positive number."""


class IterationLimit(CircleOtError):
    """The solver exceeded its iteration hard cap (mis-declared Lipschitz bound?)."""


class TooLarge(CircleOtError):
    """Instance exceeds a brute-force oracle's size guard."""


class NoDenominator(CircleOtError):
    """The operation requires histograms with a declared mass denominator."""
