"""Exception types shared across the package."""


class ApproxVertError(Exception):
    """Base class for all package errors."""


class SingularSystem(ApproxVertError):
    pass


class InfeasibleOrFlat(ApproxVertError):
    """The input inequalities do not describe a full-dimensional body."""


class Unbounded(ApproxVertError):
    pass


class TooLarge(ApproxVertError):
    """A brute-force oracle would exceed its combinatorial guard."""


class ImprecisionAlarm(ApproxVertError):
    """Arithmetic noise broke an invariant that holds in exact arithmetic."""


class EmptyMinusClass(ImprecisionAlarm):
    """A partition step produced an empty minus class."""


class DegenerateDirection(ApproxVertError):
    """A probe direction hits a vertex or edge and must be resampled."""


class DegenerateGenerators(ApproxVertError):
    pass


class NotOnSameWalk(ApproxVertError):
    """Chord endpoints do not lie on one bounding walk of the face."""


class StructureError(ApproxVertError):
    """A plane-graph audit found an inconsistency."""


class FormatError(ApproxVertError):
    """Malformed input file."""
