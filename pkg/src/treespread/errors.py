"""Exception hierarchy shared by every module."""


class TreespreadError(Exception):
    """Base class for all errors raised by treespread."""


class InvalidInput(TreespreadError, ValueError):
    """An argument is malformed or outside the operation's domain."""


class OutOfScope(InvalidInput):
    """The input violates a hypothesis the computation is defined under."""


class ResourceLimit(TreespreadError):
    """A configured enumeration or search cap would be exceeded.

    ``partial`` carries whatever was computed before the cap was hit, if
    anything meaningful was.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class PreconditionViolation(TreespreadError):
    """A documented precondition of the operation does not hold."""


class UndefinedRatio(TreespreadError, ZeroDivisionError):
    """A ratio or conditional probability has a zero denominator."""


class InvariantViolation(TreespreadError, AssertionError):
    """A hard invariant (an unconditional identity) failed to hold.

    This always indicates a bug, never bad input.
    """
