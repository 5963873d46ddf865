"""Exception types shared across the toolkit."""


class IqdiscError(Exception):
    """Base class for all toolkit errors."""


class InvalidInputError(IqdiscError):
    """An argument violates a documented precondition."""


class GenerationError(IqdiscError):
    """Benchmark generation exceeded its rejection budget."""


class InvalidDeviceError(IqdiscError):
    """A device model violates its invariants (e.g. non-PD covariance)."""


class DegenerateDataError(IqdiscError):
    """Input data carries no usable signal (zero variance, identical clusters)."""


class SchemaError(IqdiscError):
    """A serialized document does not match its expected schema."""


class ParseError(IqdiscError):
    """A raw input file could not be parsed; carries the offending line."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
