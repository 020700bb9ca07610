"""Exception hierarchy shared by the whole package.

The CLI maps these onto process exit codes: precondition violations
exit 2, resource ceilings exit 3, internal contract violations exit 1.
"""


class PreconditionError(ValueError):
    """An operation was called with inputs outside its contract."""


class ParseError(PreconditionError):
    """Malformed polynomial or config text; carries the offending position."""

    def __init__(self, message, text=None, position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class BadReductionError(PreconditionError):
    """A coefficient is not integral (or not a unit) at the requested place."""

    def __init__(self, message, place=None):
        self.place = place
        super().__init__(message)


class ResourceCeilingError(RuntimeError):
    """A configured size ceiling would be exceeded; refuse rather than thrash."""


class PrecisionError(ResourceCeilingError):
    """Interval refinement hit its bit budget before resolving a comparison."""


class ContractViolationError(RuntimeError):
    """An internal invariant that theory guarantees failed to hold."""
