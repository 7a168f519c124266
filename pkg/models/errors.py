"""
Exception hierarchy. Every error raised by the services derives from
QcatError; the ValueError / ArithmeticError bases keep plain `except`
clauses in callers working.
"""


class QcatError(Exception):
    """Root of all library errors."""


class RegisterError(QcatError, ValueError):
    """Unknown or duplicate qubit label, or a cut that does not cover the register."""


class DimensionError(QcatError, ValueError):
    """Matrix / vector shape does not match what the operation needs."""


class NonUnitaryError(QcatError, ValueError):
    """Operator violates the unitarity tolerance."""


class NormalizationError(QcatError, ValueError):
    """State is not normalized or carries non-finite amplitudes."""


class PreconditionError(QcatError, ValueError):
    """Parameters outside the region an operation is defined on."""


class DecompositionError(QcatError, ArithmeticError):
    """Canonical decomposition failed or its reassembly residual is too large."""


class ConsistencyError(QcatError, ArithmeticError):
    """Two independent evaluations of the same quantity disagree."""


class FormatError(QcatError, ValueError):
    """Input file is not valid JSON or does not follow the expected layout."""
