"""Exception hierarchy. Every error raised on purpose derives from MollifyError."""


class MollifyError(Exception):
    """Base class for all library errors."""


class ValidationError(MollifyError, ValueError):
    """An input violates a documented precondition or invariant."""


class ConditioningError(MollifyError):
    """A moment system could not be solved to the required residual."""


class ResolutionError(MollifyError):
    """The grid is too coarse for the requested kernel scale."""


class FormatError(MollifyError):
    """A signal file is malformed. The message names the line and field."""


class EmptyWindow(MollifyError):
    """No grid point falls inside the analysis window."""


class SupportError(MollifyError):
    """A test function is not supported strictly inside the box."""


class DegenerateFit(MollifyError):
    """Too few usable (positive, above-floor) points for a log-log fit."""


class AllSaturated(MollifyError):
    """Every probed derivative order saturated: the signal is at least C^k."""


class BelowNoiseFloor(MollifyError):
    """Every approximation error is below the absolute noise floor."""
