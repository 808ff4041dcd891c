"""Exception hierarchy.

Every error carries the process exit code the CLI maps it to: 2 for bad
input, 1 for a failed verification.
"""
from __future__ import annotations


class PLVolumeError(ValueError):
    exit_code = 2


# -- complexes ---------------------------------------------------------------

class ComplexError(PLVolumeError):
    pass


class DegenerateSimplex(ComplexError):
    pass


class ImproperIntersection(ComplexError):
    pass


class NonPseudomanifold(ComplexError):
    pass


class NonOrientable(ComplexError):
    pass


class FaceNotFound(ComplexError):
    pass


class MixedCells(ComplexError):
    pass


class NonInteriorPoint(ComplexError):
    pass


class PointOutsideComplex(ComplexError):
    pass


class InvalidBaryPoint(ComplexError):
    pass


# -- forms -------------------------------------------------------------------

class FormError(PLVolumeError):
    pass


class NonPositiveVolume(FormError):
    pass


class NotOriented(FormError):
    pass


class ComplexMismatch(FormError):
    pass


class StaleStep(FormError):
    pass


# -- transfer / equalizer ----------------------------------------------------

class NotAdjacent(PLVolumeError):
    pass


class SpecOutOfRange(PLVolumeError):
    pass


class DegenerateSolve(PLVolumeError):
    """A volume constraint system came out singular or non-interior.

    Cannot happen for nondegenerate input; signals an internal bug.
    """
    exit_code = 1


class AlreadyEqual(PLVolumeError):
    pass


class Disconnected(PLVolumeError):
    pass


class TotalVolumeMismatch(PLVolumeError):
    pass


class ComponentVolumeMismatch(TotalVolumeMismatch, Disconnected):
    """Totals agree globally but not on some connected component."""

    def __init__(self, message: str, component: tuple[int, ...]):
        super().__init__(message)
        self.component = component


class DimensionUnsupported(PLVolumeError):
    pass


# -- documents / cli ---------------------------------------------------------

class ParseError(PLVolumeError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class ValidationError(PLVolumeError):
    """A document parsed but describes an invalid complex or form."""

    def __init__(self, message: str, cause: Exception | None = None):
        super().__init__(message)
        self.cause = cause

    @property
    def kind(self) -> str:
        return type(self.cause).__name__ if self.cause is not None else "ValidationError"


class BadParams(PLVolumeError):
    pass


class UnsupportedDimension(PLVolumeError):
    pass


# -- numerics lab ------------------------------------------------------------

class NonPositiveDelta(PLVolumeError):
    pass


class NotMonotone(PLVolumeError):
    pass


class BadEndpoint(PLVolumeError):
    pass


class NonPositiveF(PLVolumeError):
    pass
