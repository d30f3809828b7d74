"""Exception hierarchy shared by all modules."""


class GeometryError(ValueError):
    pass


# conic_core
class NotAnEllipse(GeometryError):
    pass


class PointOnConic(GeometryError):
    pass


class PointInside(GeometryError):
    pass


class LineAtInfinity(GeometryError):
    pass


class PointAtInfinity(GeometryError):
    pass


class SingularConic(GeometryError):
    pass


class DegenerateFit(GeometryError):
    pass


class SingularMap(GeometryError):
    pass


# poncelet
class CausticNotInterior(GeometryError):
    pass


class VertexOnCaustic(GeometryError):
    pass


class NoSecondIntersection(GeometryError):
    pass


class NotAPorism(GeometryError):
    def __init__(self, message, max_defect=float("nan")):
        super().__init__(message)
        self.max_defect = max_defect


class NoSignChange(GeometryError):
    pass


class MaxIterations(GeometryError):
    pass


# tri_centers
class DegenerateTriangle(GeometryError):
    pass


class UnsupportedCenter(GeometryError):
    pass


class OnSideline(GeometryError):
    pass


class PoleAtInfinity(GeometryError):
    pass


class DegenerateAdams(GeometryError):
    pass


class SelfIntersecting(GeometryError):
    pass


# families
class InvalidShape(GeometryError):
    pass


class CircularOuter(InvalidShape):
    pass


class NoValidCaustic(GeometryError):
    pass


class EulerViolation(InvalidShape):
    pass


class OutsideHalfEllipse(InvalidShape):
    pass


# invariants / loci
class UnsupportedForFamily(GeometryError):
    pass


class NotHomothetic(GeometryError):
    pass
