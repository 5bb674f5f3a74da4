"""Error taxonomy mirrored by the CLI exit codes."""


class InputFormatError(ValueError):
    """Unreadable or malformed input data (CLI exit code 2)."""


class DuplicatePointsError(InputFormatError):
    """Repeated or indistinguishably close sample sites (CLI exit code 2)."""


class InsufficientDataError(ValueError):
    """Fewer sample points than the operation requires (CLI exit code 3)."""


class InvalidParameterError(ValueError):
    """Parameter outside its documented range (CLI exit code 4)."""


class NumericalFailureError(RuntimeError):
    """A numerical invariant failed beyond its tolerance (CLI exit code 5)."""
