"""Exception types shared across the package."""


class RelaxedAlignError(Exception):
    """Base class for all package errors."""


class CycleError(RelaxedAlignError):
    """An order relation cannot be closed into a strict partial order."""


class UnderflowError(RelaxedAlignError):
    """Multiset subtraction would drop a count below zero."""


class UnknownRole(RelaxedAlignError):
    """A role name is not declared in the object universe."""


class UnknownObject(RelaxedAlignError):
    """An object name is not declared in the object universe."""


class NotEnabled(RelaxedAlignError):
    """A transition firing is not enabled in the given marking."""


class BadPartition(RelaxedAlignError):
    """An event relaxation partition does not split the event's objects."""


class NoAlignment(RelaxedAlignError):
    """No alignment exists within the reachable state space."""


class BudgetExceeded(RelaxedAlignError):
    """The search exhausted its state budget before finding an optimum."""


class NoRunFound(RelaxedAlignError):
    """Run generation could not reach the final marking."""


class TargetNotFound(RelaxedAlignError):
    """An injection target selector matched no event."""


class DocumentError(RelaxedAlignError):
    """A document failed schema validation or referenced unknown ids."""
