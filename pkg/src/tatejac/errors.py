"""Exception hierarchy.

Every error raised for a violated contract derives from :class:`TateError`;
the CLI maps those to exit status 1.
"""


class TateError(Exception):
    """Base class for contract violations."""


class DomainMismatchError(TateError, ValueError):
    """Operands live in incompatible coefficient domains."""


class NotAUnitError(TateError, ArithmeticError):
    """Raised when an inverse is requested for a non-unit.

    ``certificate`` carries whatever evidence the caller produced (a
    :class:`tatejac.series.UnitCheck` for series, ``None`` for scalars).
    """

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class CompositionError(TateError, ValueError):
    """Substitution into a truncated series with non-vanishing constant terms."""


class PreconditionError(TateError, ValueError):
    """An operation was called outside its documented preconditions."""


class BudgetError(TateError):
    """An exhaustive computation would exceed its configured budget."""
