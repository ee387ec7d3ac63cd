"""Exception hierarchy shared by every module."""


class RingError(Exception):
    """Base class for all errors raised by the package."""


class InputError(RingError, ValueError):
    """Malformed user input: bad table shapes, bad specs, unknown names."""


class PreconditionError(RingError, ValueError):
    """An operation was called on arguments violating its precondition."""


class UnsupportedOperationError(RingError, TypeError):
    """The operation is not defined for this kind of ring."""


class ResourceError(RingError):
    """A construction would exceed the configured size cap."""


class RingAxiomError(InputError):
    """A user-supplied table does not describe a ring."""

    def __init__(self, violations, message=None):
        self.violations = list(violations)
        if message is None:
            first = self.violations[0]
            message = f"ring axiom violated: {first.axiom} at {first.witness}"
        super().__init__(message)
