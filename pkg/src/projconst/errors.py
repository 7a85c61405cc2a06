"""Exception hierarchy shared by every module of the package."""


class ProjConstError(Exception):
    """Base class for all errors raised by projconst."""


class DimensionError(ProjConstError, ValueError):
    """Empty or zero-sized input where a nonempty one is required."""


class ShapeError(ProjConstError, ValueError):
    """Inconsistent shapes, or a matrix lacking a required structure."""


class DomainError(ProjConstError, ValueError):
    """A scalar argument outside the admissible range (n = 0, odd k, ...)."""


class PreconditionError(ProjConstError, ValueError):
    """A documented precondition on the input object does not hold."""


class RankError(ProjConstError, ValueError):
    """A set of vectors that must span the space does not."""


class UnsupportedConstructionError(ProjConstError):
    """No explicit construction is available for the requested system."""


class UnsupportedMethodError(ProjConstError):
    """The requested algorithm does not apply to this input."""


class InvalidWitnessError(ProjConstError, ValueError):
    """A trace-duality witness fails to leave the subspace invariant."""


class SolverError(ProjConstError, RuntimeError):
    """An optimization routine reported infeasibility or unboundedness."""


class SchemaError(ProjConstError, ValueError):
    """A JSON document does not match its schema.

    ``location`` is a JSON-pointer-like path to the offending element.
    """

    def __init__(self, message, location=""):
        super().__init__(f"{location or '<root>'}: {message}")
        self.location = location
