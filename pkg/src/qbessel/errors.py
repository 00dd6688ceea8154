"""Exception hierarchy shared by all qbessel modules."""


class QBesselError(Exception):
    """Base class for every error raised by the package."""


class DomainError(QBesselError, ValueError):
    """An argument lies outside the region where a quantity is defined."""


class BranchError(DomainError):
    """A principal-branch power was requested at a zero of its base."""


class UsageError(QBesselError, ValueError):
    """A routine was called with structurally invalid input (e.g. an empty table)."""


class ConvergenceError(QBesselError, ArithmeticError):
    """A series or iteration did not reach the requested tolerance within its cap."""


class ZeroNotFoundError(ConvergenceError):
    """The bracket scan passed its cutoff before finding the requested zeros."""


class InternalConsistencyError(QBesselError, RuntimeError):
    """A guaranteed mathematical property failed numerically."""
