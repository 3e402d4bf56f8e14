"""Exception types raised across the package.

Everything inherits from :class:`DriftRegError` so callers can catch the
package's failures with a single except clause, while the secondary base
classes (ValueError / RuntimeError) keep the usual Python semantics.
"""


class DriftRegError(Exception):
    """Base class for all driftreg errors."""


class EmptyBatch(DriftRegError, ValueError):
    """A fit was attempted on an empty batch of rows."""


class RaggedRows(DriftRegError, ValueError):
    """Rows in one batch disagree on feature count."""


class ArityMismatch(DriftRegError, ValueError):
    """A feature vector's length does not match the expected feature count."""


class NonFiniteInput(DriftRegError, ValueError):
    """An input value is NaN, infinite, or otherwise out of domain."""


class InsufficientRows(DriftRegError, ValueError):
    """Too few rows to fit a model (need at least feature count + 1)."""


class NumericalFailure(DriftRegError, ArithmeticError):
    """The stabilized linear solve failed; the batch is numerically hopeless."""


class PushWhenFull(DriftRegError, RuntimeError):
    """A row was pushed into an already-full evaluation buffer.

    The buffer is drained at the end of every evaluation cycle, so this
    signals an orchestration bug, not bad data.
    """


class WrongPhase(DriftRegError, RuntimeError):
    """An operation was called in the wrong engine phase (priming vs streaming)."""


class LengthMismatch(DriftRegError, ValueError):
    """Paired sequences have different lengths."""


class EmptyInput(DriftRegError, ValueError):
    """A metric was requested over zero values."""


class EmptyTrace(DriftRegError, ValueError):
    """A run result was requested from an empty prediction trace."""


class InsufficientData(DriftRegError, ValueError):
    """The dataset is too short for the requested working-point prefix."""


class SchemaMismatch(DriftRegError, ValueError):
    """A dataset file is missing expected columns."""


class ParseError(DriftRegError, ValueError):
    """A dataset cell failed to parse; carries the offending location."""

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class ExperimentError(DriftRegError, RuntimeError):
    """An experiment failed; carries the experiment label."""

    def __init__(self, label, message):
        super().__init__(f"{label}: {message}")
        self.label = label
