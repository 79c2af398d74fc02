"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument is outside its documented domain."""


class HorizonError(ValueError):
    """A vertex or round beyond the colouring's horizon was requested."""


class FormatError(ValueError):
    """A serialized object could not be parsed."""


class DegreeError(ValueError):
    """An edge insertion would push a vertex past degree two."""


class CycleError(ValueError):
    """An edge insertion would close a cycle."""


class SpareDegreeError(ValueError):
    """A vertex set does not carry enough spare degree for the request."""


class AbsorptionError(ValueError):
    """The absorption preconditions do not hold for the given instance."""


class ConsistencyError(RuntimeError):
    """The engine hit a state its own guarantees rule out.

    This signals corrupted input (or a bug), never a routine failure.
    """


class InvariantViolation(AssertionError):
    """A run-time invariant check failed."""

    def __init__(self, property_id: str, round_no: int, lhs, rhs, note: str = ""):
        self.property_id = property_id
        self.round_no = round_no
        self.lhs = lhs
        self.rhs = rhs
        self.note = note
        msg = f"{property_id} failed at round {round_no}: lhs={lhs!r} rhs={rhs!r}"
        if note:
            msg += f" ({note})"
        super().__init__(msg)
