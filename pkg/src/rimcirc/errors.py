"""Exception types shared by every module."""


class RimError(Exception):
    """Base class for all errors raised by this package."""


class AlphabetMismatch(RimError):
    pass


class InvalidTable(RimError):
    pass


class DomainError(RimError):
    """An operation was called outside its precondition."""


class InputTooShort(RimError):
    pass


class CircuitInvalid(RimError):
    """A circuit breaks an arity, ordering or degree rule.

    `step` is the decoding step (1-4) whose check failed and `vertex` the
    offending vertex number when there is one.
    """

    def __init__(self, message, step=None, vertex=None):
        super().__init__(message)
        self.step = step
        self.vertex = vertex


class ResourceCap(RimError):
    """A brute-force sweep would exceed the configured cap."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class PropertyViolation(RimError):
    pass
