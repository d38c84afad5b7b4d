"""Exception hierarchy shared by all shaplab modules."""


class ShapError(Exception):
    """Base class for errors raised by shaplab."""


class DomainError(ShapError, ValueError):
    """An argument lies outside the domain of the operation."""


class LengthMismatch(DomainError):
    """Two bit strings (or distributions) of different lengths were combined."""


class ResourceError(ShapError):
    """A configured size cap would be exceeded."""


class IntegrityError(ShapError, ArithmeticError):
    """A numerical invariant (unit norm, probability range) was violated."""
