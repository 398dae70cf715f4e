"""Exception types shared across the toolkit."""


class BinaryTailsError(Exception):
    """Base class for all toolkit errors."""


class DomainError(BinaryTailsError, ValueError):
    """An argument lies outside the domain of the operation."""


class Unbounded(BinaryTailsError):
    """A supremum or conjugate does not stay finite within the search caps."""


class NotConvex(BinaryTailsError):
    """Conjugation was requested for a function without a convexity certificate."""


class ConditionViolated(BinaryTailsError):
    """A structural condition (A1-A5, a bilateral sandwich, ...) failed.

    ``condition`` names the failing check so callers can report it.
    """

    def __init__(self, condition: str, message: str):
        super().__init__(f"{condition}: {message}")
        self.condition = condition
