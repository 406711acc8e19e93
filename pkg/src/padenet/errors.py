"""Exception and warning types shared across the package."""


class PadeNetError(Exception):
    """Base class for all package errors."""


class ValidationError(PadeNetError, ValueError):
    """Input violates a documented precondition."""


class SchemaError(ValidationError):
    """A serialized model or sample file is malformed.

    ``path`` names the offending field, e.g. ``"plus.gamma"``.
    """

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


class NumericalError(PadeNetError, ArithmeticError):
    """A numerical procedure could not produce a meaningful result."""


class RepresentationWarning(UserWarning):
    """The output-layer least-squares system is not solved exactly."""


class DegeneracyWarning(UserWarning):
    """A null space or degree reduction was ambiguous; a flag was recorded."""
