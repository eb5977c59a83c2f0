"""Exception types shared across the package."""


class QcspError(Exception):
    """Base class for every error this package raises deliberately."""


class ProblemValidationError(QcspError):
    """A problem definition violates a structural invariant."""


class DuplicateVariableError(ProblemValidationError):
    """Two variables in a binder carry the same name."""


class EmptyDomainError(ProblemValidationError):
    """A variable was declared with an empty domain."""


class UnknownVariableError(ProblemValidationError):
    """A constraint mentions a variable that is not in the binder."""


class ArityMismatchError(ProblemValidationError):
    """A table constraint holds a tuple whose arity differs from its scope."""


class ExprSyntaxError(ProblemValidationError):
    """An arithmetic comparison constraint could not be parsed."""


class IncompleteAssignmentError(QcspError):
    """An operation needed a complete assignment but some variable is unbound."""


class ShapeMismatchError(QcspError):
    """A strategy tree does not match the binder it is checked against."""


class BudgetExceededError(QcspError):
    """An enumeration or compilation exceeded its explicit node budget."""


class NotExistentialError(QcspError):
    """A guard lookup was requested for a universally quantified variable."""


class MalformedBaseError(QcspError):
    """Serialized base data violates the base invariants."""


class MixedBinderError(QcspError):
    """Bases being combined disagree on their remaining binder."""


class GameOverError(QcspError):
    """A move was requested on a prefix that already binds every variable."""


class SameValueError(QcspError):
    """A next-move-choice query must propose a value different from the one played."""


class NotOptimalError(QcspError):
    """A guard walk dead-ended, which an optimal base never allows."""


class BinderMismatchError(QcspError):
    """A certificate was checked against a problem with a different binder."""
