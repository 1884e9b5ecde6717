"""Exception types shared across the package.

Everything raised on bad input derives from :class:`EtvoError` so callers
(and the CLI) can map the whole family to a single exit path.  I/O failures
use the builtin ``OSError``/``FileNotFoundError``.
"""


class EtvoError(Exception):
    """Base class for all domain errors."""


class ParseError(EtvoError):
    """CSV could not be parsed; carries the 1-based row number."""

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class NonUniformSampling(EtvoError):
    """Inter-sample gaps deviate from the median by more than the tolerance."""


class IncompatibleSampling(EtvoError):
    """Signals do not share a sample period (or their grids are offset)."""


class RangeNotMultipleOfPeriod(EtvoError):
    """A delay bound is not an integer multiple of the sample period."""


class InsufficientCoverage(EtvoError):
    """Input signal does not cover the window required by the delay range."""

    def __init__(self, message: str, missing_samples: int = 0):
        self.missing_samples = missing_samples
        super().__init__(message)


class LengthMismatch(EtvoError):
    """Two signals that must have equal length do not."""


class EmptySignal(EtvoError):
    """An operation received a zero-length sample array."""


class CorruptDirectionMatrix(EtvoError):
    """Backtracking left the valid index range; the matrix is inconsistent."""


class InvalidPath(EtvoError):
    """A warp path violates the monotonicity/continuity constraint."""


class TooShort(EtvoError):
    """Series is too short for the requested statistic."""


class NegativeEvo(EtvoError):
    """A value-offset series contains negative entries (upstream corruption)."""


class ZeroPowerSignal(EtvoError):
    """Cannot scale noise against a signal with zero power."""


class TooLarge(EtvoError):
    """Enumeration would exceed the configured budget."""


class SlackUnsupported(EtvoError):
    """The brute-force oracle only handles a zero slack penalty."""
