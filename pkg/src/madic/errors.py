"""Exception hierarchy shared by all modules."""


class MadicError(Exception):
    """Base class for calculus errors."""


class ParameterMismatchError(MadicError):
    """A word or vertex refers to indices outside the configured (m, s)."""


class PreconditionError(MadicError):
    """An operation's stated precondition does not hold for the input."""


class ResourceCapError(MadicError):
    """A configured resource cap (vertices, ball elements) was exceeded."""


class BudgetExhaustedError(MadicError):
    """A bounded search ran out of budget before finding a witness."""


class CertificationError(MadicError):
    """An internal consistency certificate failed to verify (engine bug)."""
