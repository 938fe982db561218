"""Exception types shared across the package."""


class DomainError(ValueError):
    """A well-formed query that violates an operation's precondition."""


class ParseError(ValueError):
    """Text that does not match the divisor or character grammar."""


class EmptyPrioritaryStack(DomainError):
    """The discriminant lies below the minimal discriminant for its rank and slope."""
