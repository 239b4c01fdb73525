"""Exception types shared across the package."""


class MemphaseError(Exception):
    """Base class for all package errors."""


class GeometryError(MemphaseError):
    pass


class NonMonotoneX(GeometryError):
    """x-coordinates of a generating curve must be nondecreasing."""


class NegativeY(GeometryError):
    """Generating curves live in the closed upper half plane."""


class DegenerateLength(GeometryError):
    """Polyline length is (numerically) zero."""


class PoleTangentNotPerpendicular(GeometryError):
    """Curve meets the axis of revolution at a slanted angle; the surface
    would be singular there."""


class NonvanishingWell(MemphaseError):
    """Double-well potential does not vanish at +-1."""


class EmptyResult(MemphaseError):
    """Simplification removed every component of a membrane."""


class EpsTooLarge(MemphaseError):
    """Recovery construction does not fit into the available segment."""


class AssemblyOverlap(MemphaseError):
    """Assembled recovery curve would violate x-monotonicity."""


class SingularConstraintSystem(MemphaseError):
    """Constraint gradients are (numerically) linearly dependent."""


class StepRejected(MemphaseError):
    """Gradient-flow step increased the energy or left the admissible set."""


class UnknownScenario(MemphaseError):
    pass


class IncompatibleGrids(MemphaseError):
    """Run outputs live on different grids and cannot be compared."""
