"""Exception hierarchy shared by all tautline modules."""


class TautlineError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(TautlineError, ValueError):
    """Input data violates a structural invariant."""


class DomainError(ValidationError):
    """A query point lies outside the open unit interval."""


class ConfigurationError(ValidationError):
    """Unknown generator name or invalid generator/run parameters."""


class GridError(ValidationError):
    """Two objects that must share (or refine) a grid do not."""


class SizeError(ValidationError):
    """Problem too large for an exhaustive method."""


class SignalFileError(TautlineError):
    """Base class for signal CSV problems."""


class CsvParseError(SignalFileError, ValueError):
    """Malformed, empty or truncated CSV content."""


class MonotonicityError(SignalFileError, ValueError):
    """Breakpoints in a CSV file are not strictly increasing or do not end at 1."""


class SignalIOError(SignalFileError, OSError):
    """The underlying file could not be read or written."""


class IllConditionedError(TautlineError, ArithmeticError):
    """Tube walls collapse onto each other at the working precision."""


class InconsistencyError(TautlineError):
    """A knot is classified as touching both tube walls."""


class InvalidIntegrandError(ValidationError):
    """Supplied integrand derivative is not strictly increasing."""


class ConvergenceError(TautlineError, RuntimeError):
    """Iterative oracle stopped at ``max_iter`` without meeting its tolerance."""

    def __init__(self, message, residual, iterations):
        super().__init__(f"{message} (residual={residual:.3e}, iterations={iterations})")
        self.residual = residual
        self.iterations = iterations
