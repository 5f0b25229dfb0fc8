"""Planar elliptic systems: decoupling classification and certified
interpenetration counterexamples.

The pipeline: classify a constant-coefficient 2x2 system (A, B; C, D) by
whether it is equivalent to two copies of one scalar operator; when it is
not, synthesize explicit polynomial solutions and certify that they violate
the two classical injectivity properties of planar harmonic mappings — a
Dirichlet solution with convex boundary image that is not a homeomorphism
(it folds), and a homeomorphism whose Jacobian vanishes at the disk center.
The decoupled case is demonstrated positively through Poisson extension.
"""

from ._kernels import BACKEND, available_backends
from .errors import (
    DegenerateInput,
    DegreeTooHigh,
    DiagonalizableSystem,
    IllConditioned,
    InterpenError,
    KTooSmall,
    NoFullRankTheta,
    NonFiniteInput,
    NoPositiveRadius,
    NotElliptic,
    ParameterOutOfRange,
    PointOnCurve,
    SingularMixing,
    TooCloseToBoundary,
)
from .geometry import (
    ClosedPolyline,
    InjectivityVerdict,
    SignField,
    grid_injectivity,
    is_convex,
    is_simple_closed,
    jacobian_sign_field,
    winding_number,
)
from .harmonic import BoundaryMap, poisson_extend, rkc_demo
from .lewy import LewyBundle, build_lewy_counterexample, find_positivity_radius
from .polynomials import (
    BivariatePoly,
    PlanarPolyMap,
    hessian,
    jacobian_det,
    system_residual,
)
from .rkc import (
    Disk,
    RkcBundle,
    build_rkc_counterexample,
    fold_certificate,
    nodal_conic,
    strip_certificate,
)
from .synthesis import (
    CubicSolution,
    QuadraticSolution,
    build_FG_cubic,
    build_FG_quadratic,
    rhs_cubic,
    rhs_quadratic,
    select_theta,
    synthesize_cubic,
    synthesize_quadratic,
)
from .systems import (
    Classification,
    EllipticityVerdict,
    EllipticSystem,
    Mixing,
    SymMat2,
    apply_mixing,
    classify,
    is_elliptic,
    is_strongly_convex,
    lame,
    laplacian,
    perturbed_laplacian,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "available_backends",
    "BivariatePoly",
    "BoundaryMap",
    "Classification",
    "ClosedPolyline",
    "CubicSolution",
    "Disk",
    "EllipticSystem",
    "EllipticityVerdict",
    "InjectivityVerdict",
    "LewyBundle",
    "Mixing",
    "PlanarPolyMap",
    "QuadraticSolution",
    "RkcBundle",
    "SignField",
    "SymMat2",
    "apply_mixing",
    "build_FG_cubic",
    "build_FG_quadratic",
    "build_lewy_counterexample",
    "build_rkc_counterexample",
    "classify",
    "fold_certificate",
    "find_positivity_radius",
    "grid_injectivity",
    "hessian",
    "is_convex",
    "is_elliptic",
    "is_simple_closed",
    "is_strongly_convex",
    "jacobian_det",
    "jacobian_sign_field",
    "lame",
    "laplacian",
    "nodal_conic",
    "perturbed_laplacian",
    "poisson_extend",
    "rhs_cubic",
    "rhs_quadratic",
    "rkc_demo",
    "select_theta",
    "strip_certificate",
    "synthesize_cubic",
    "synthesize_quadratic",
    "system_residual",
    "winding_number",
    # errors
    "InterpenError",
    "NonFiniteInput",
    "ParameterOutOfRange",
    "SingularMixing",
    "NotElliptic",
    "DegreeTooHigh",
    "DiagonalizableSystem",
    "NoFullRankTheta",
    "IllConditioned",
    "KTooSmall",
    "NoPositiveRadius",
    "DegenerateInput",
    "PointOnCurve",
    "TooCloseToBoundary",
]
