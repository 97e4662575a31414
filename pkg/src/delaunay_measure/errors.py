"""Exception hierarchy shared by every module of the package."""


class MeasureError(Exception):
    """Base class for all computational failures raised by this package."""


class DegenerateInput(MeasureError):
    """Cocircular or collinear configuration within the geometric tolerance."""


class DuplicatePoint(MeasureError):
    pass


class CoincidingPoints(MeasureError):
    """Two points are closer than the coincidence tolerance."""


class CollinearFace(MeasureError):
    pass


class PoleHit(MeasureError):
    """A Moebius map sends a finite point to infinity."""


class SingularArgument(MeasureError):
    pass


class FlipInsideStencil(MeasureError):
    """The triangulation changes inside a finite-difference stencil."""


class TooLarge(MeasureError):
    pass


class SingularSubmatrix(MeasureError):
    pass


class SingularMatrix(MeasureError):
    pass


class CombinatoricsChanged(MeasureError):
    pass


class OddDimension(MeasureError):
    pass


class AuditMismatch(MeasureError):
    """A stored chain quantity disagrees with its recomputation."""
