"""Exception hierarchy.

Every error raised deliberately by the toolkit derives from ``EcmkitError``
so callers (and the CLI) can catch toolkit failures without swallowing
programming errors.
"""


class EcmkitError(Exception):
    """Base class for toolkit errors."""


class InvalidOrderError(EcmkitError, ValueError):
    pass


class DegenerateSeriesError(EcmkitError, ValueError):
    pass


class AlignmentError(EcmkitError, ValueError):
    pass


class InsufficientObservationsError(EcmkitError, ValueError):
    pass


class CollinearityError(EcmkitError, ValueError):
    def __init__(self, message: str, column: str | None = None):
        super().__init__(message)
        self.column = column


class DegenerateFitError(EcmkitError, ValueError):
    pass


class LabelError(EcmkitError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class InvalidRankError(EcmkitError, ValueError):
    pass


class DecompositionError(EcmkitError, ValueError):
    def __init__(self, message: str, eigenvalue: float | None = None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class SchemaError(EcmkitError, ValueError):
    pass


class ParseError(EcmkitError, ValueError):
    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


class MissingDataError(EcmkitError, ValueError):
    pass


class DuplicateYearError(EcmkitError, ValueError):
    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


class ConfigError(EcmkitError, ValueError):
    pass


class StageError(EcmkitError):
    """A pipeline stage failed; wraps the underlying error."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause
