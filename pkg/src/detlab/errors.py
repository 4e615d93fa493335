"""Exception types shared across the package.

ValidationError marks rejected inputs (bad dimensions, violated invariants,
malformed files); NumericalError marks breakdowns of otherwise valid
computations (eigensolver failure, excessive imaginary residue).  The CLI
maps them to exit codes 2 and 3 respectively.
"""


class ValidationError(ValueError):
    """Input violates a documented precondition or type invariant."""


class DimensionMismatchError(ValidationError):
    """Operands have incompatible dimensions."""


class NumericalError(ArithmeticError):
    """A numerically valid input produced an untrustworthy result."""
