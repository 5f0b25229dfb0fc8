"""Exception hierarchy shared by all interpen modules."""


class InterpenError(Exception):
    """Base class for all interpen errors."""


class NonFiniteInput(InterpenError):
    """A coefficient or coordinate is NaN or infinite."""


class ParameterOutOfRange(InterpenError):
    """A parameter violates its admissible range (e.g. mu <= 0)."""


class SingularMixing(InterpenError):
    """The 2x2 mixing matrix is singular."""


class NotElliptic(InterpenError):
    """Operation requires a system satisfying the ellipticity condition."""


class DegreeTooHigh(InterpenError):
    """Polynomial degree exceeds what the operation supports."""


class DiagonalizableSystem(InterpenError):
    """The system decouples into two copies of one scalar operator, so no
    counterexample exists; route it to the harmonic demo instead."""


class NoFullRankTheta(InterpenError):
    """No rotation angle makes the synthesis matrix full rank (the system is
    equivalent to diagonal form)."""


class IllConditioned(InterpenError):
    """Best synthesis matrix is numerically rank deficient."""


class KTooSmall(InterpenError):
    """Requested shear constant k is below |b| (or zero)."""


class NoPositiveRadius(InterpenError):
    """No radius with a positive Jacobian on the punctured disk was found."""


class DegenerateInput(InterpenError):
    """Geometric input is degenerate (repeated vertices, zero-length edges)."""


class PointOnCurve(InterpenError):
    """Winding number requested for a point lying on the curve."""


class TooCloseToBoundary(InterpenError):
    """Poisson evaluation point too close to the unit circle."""
