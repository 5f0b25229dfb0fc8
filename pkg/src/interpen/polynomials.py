"""Exact coefficient-level calculus for low-degree bivariate polynomials.

Everything the counterexample constructions need — Hessians, residuals of a
map under a constant-coefficient system, Jacobian determinants — closes over
polynomials of total degree <= 3 (Jacobians reach degree 4), so all calculus
here is done exactly on coefficient dictionaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegreeTooHigh, NonFiniteInput
from ._kernels import impl as _impl

#: Coefficients below RESIDUAL_RTOL * (1 + max input coefficient) count as zero.
RESIDUAL_RTOL = 1e-10


@dataclass(frozen=True)
class BivariatePoly:
    """Real polynomial in (x, y) as a map {(i, j): coefficient}.

    Absent keys are zero.  Zero coefficients are dropped on construction so
    equality of dictionaries matches equality of polynomials.
    """

    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), c in self.coeffs.items():
            c = float(c)
            if not math.isfinite(c):
                raise NonFiniteInput(f"coefficient ({i},{j}) is not finite")
            if i < 0 or j < 0:
                raise ValueError(f"negative exponents ({i},{j})")
            if c != 0.0:
                clean[(int(i), int(j))] = c
        object.__setattr__(self, "coeffs", clean)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero() -> "BivariatePoly":
        return BivariatePoly({})

    @staticmethod
    def constant(c: float) -> "BivariatePoly":
        return BivariatePoly({(0, 0): c})

    @staticmethod
    def x() -> "BivariatePoly":
        return BivariatePoly({(1, 0): 1.0})

    @staticmethod
    def y() -> "BivariatePoly":
        return BivariatePoly({(0, 1): 1.0})

    @staticmethod
    def from_triples(triples) -> "BivariatePoly":
        """Build from [i, j, coefficient] triples (the serialized form)."""
        coeffs = {}
        for i, j, c in triples:
            key = (int(i), int(j))
            coeffs[key] = coeffs.get(key, 0.0) + float(c)
        return BivariatePoly(coeffs)

    def to_triples(self) -> list:
        return [[i, j, c] for (i, j), c in sorted(self.coeffs.items())]

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "BivariatePoly") -> "BivariatePoly":
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0.0) + c
        return BivariatePoly(out)

    def __sub__(self, other: "BivariatePoly") -> "BivariatePoly":
        return self + other.scaled(-1.0)

    def __mul__(self, other: "BivariatePoly") -> "BivariatePoly":
        out = {}
        for (i1, j1), c1 in self.coeffs.items():
            for (i2, j2), c2 in other.coeffs.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0.0) + c1 * c2
        return BivariatePoly(out)

    def scaled(self, s: float) -> "BivariatePoly":
        return BivariatePoly({key: s * c for key, c in self.coeffs.items()})

    def coeff(self, i: int, j: int) -> float:
        return self.coeffs.get((i, j), 0.0)

    def degree(self) -> int:
        if not self.coeffs:
            return 0
        return max(i + j for i, j in self.coeffs)

    def max_abs_coeff(self) -> float:
        if not self.coeffs:
            return 0.0
        return max(abs(c) for c in self.coeffs.values())

    def diff_x(self) -> "BivariatePoly":
        return BivariatePoly(
            {(i - 1, j): i * c for (i, j), c in self.coeffs.items() if i > 0}
        )

    def diff_y(self) -> "BivariatePoly":
        return BivariatePoly(
            {(i, j - 1): j * c for (i, j), c in self.coeffs.items() if j > 0}
        )

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, x: float, y: float) -> float:
        """Horner evaluation: inner Horner in x per y-power, outer in y."""
        if not self.coeffs:
            return 0.0
        deg_x = max(i for i, _ in self.coeffs)
        deg_y = max(j for _, j in self.coeffs)
        acc = 0.0
        for j in range(deg_y, -1, -1):
            row = 0.0
            for i in range(deg_x, -1, -1):
                row = row * x + self.coeffs.get((i, j), 0.0)
            acc = acc * y + row
        return acc

    def evaluate_many(self, xs, ys) -> np.ndarray:
        """Vectorized evaluation on arrays of points (hot-path kernel)."""
        xs = np.ascontiguousarray(xs, dtype=float).ravel()
        ys = np.ascontiguousarray(ys, dtype=float).ravel()
        items = sorted(self.coeffs.items())
        if not items:
            return np.zeros_like(xs)
        powers = np.array([key for key, _ in items], dtype=np.int64)
        cs = np.array([c for _, c in items], dtype=float)
        return _impl.poly_eval_grid(powers, cs, xs, ys)


def poly_is_zero(p: BivariatePoly, ref_scale: float) -> bool:
    """Zero test relative to the magnitude of the inputs that produced p."""
    return p.max_abs_coeff() <= RESIDUAL_RTOL * (1.0 + ref_scale)


@dataclass(frozen=True)
class PlanarPolyMap:
    """A polynomial map of the plane, u = (u1, u2)."""

    u1: BivariatePoly
    u2: BivariatePoly

    @staticmethod
    def identity() -> "PlanarPolyMap":
        return PlanarPolyMap(BivariatePoly.x(), BivariatePoly.y())

    def evaluate(self, x: float, y: float) -> tuple:
        return (self.u1.evaluate(x, y), self.u2.evaluate(x, y))

    def evaluate_many(self, xs, ys) -> np.ndarray:
        """Evaluate both components on point arrays; returns shape (n, 2)."""
        return np.stack(
            [self.u1.evaluate_many(xs, ys), self.u2.evaluate_many(xs, ys)], axis=1
        )

    def jacobian_at(self, x: float, y: float) -> np.ndarray:
        return np.array(
            [
                [self.u1.diff_x().evaluate(x, y), self.u1.diff_y().evaluate(x, y)],
                [self.u2.diff_x().evaluate(x, y), self.u2.diff_y().evaluate(x, y)],
            ]
        )

    def max_abs_coeff(self) -> float:
        return max(self.u1.max_abs_coeff(), self.u2.max_abs_coeff())

    def to_dict(self) -> dict:
        return {"u1": self.u1.to_triples(), "u2": self.u2.to_triples()}

    @staticmethod
    def from_dict(d: dict) -> "PlanarPolyMap":
        return PlanarPolyMap(
            BivariatePoly.from_triples(d["u1"]), BivariatePoly.from_triples(d["u2"])
        )


def rotate_map(mapping: PlanarPolyMap, phi: float) -> PlanarPolyMap:
    """Compose with the rotation R_phi on the target side."""
    c, s = math.cos(phi), math.sin(phi)
    return PlanarPolyMap(
        u1=mapping.u1.scaled(c) - mapping.u2.scaled(s),
        u2=mapping.u1.scaled(s) + mapping.u2.scaled(c),
    )


def _check_degree(poly: BivariatePoly, limit: int, what: str):
    if poly.degree() > limit:
        raise DegreeTooHigh(f"{what}: degree {poly.degree()} exceeds {limit}")


def hessian(poly: BivariatePoly):
    """2x2 matrix of second partials; entries have degree <= 1 for cubics."""
    _check_degree(poly, 3, "hessian input")
    pxx = poly.diff_x().diff_x()
    pxy = poly.diff_x().diff_y()
    pyy = poly.diff_y().diff_y()
    return ((pxx, pxy), (pxy, pyy))


def system_residual(system, mapping: PlanarPolyMap):
    """Residual polynomials of the map under div(A grad u1 + B grad u2), etc.

    With constant coefficients the divergence contracts onto the Hessian, so
    the residual pair is (A : Hess u1 + B : Hess u2,
    C : Hess u1 + D : Hess u2), computed exactly at coefficient level.
    """
    _check_degree(mapping.u1, 3, "system_residual u1")
    _check_degree(mapping.u2, 3, "system_residual u2")
    h1 = hessian(mapping.u1)
    h2 = hessian(mapping.u2)

    def contract(m, h):
        return (
            h[0][0].scaled(m.m11) + h[0][1].scaled(2.0 * m.m12) + h[1][1].scaled(m.m22)
        )

    r1 = contract(system.A, h1) + contract(system.B, h2)
    r2 = contract(system.C, h1) + contract(system.D, h2)
    return (r1, r2)


def residual_scale(system, mapping: PlanarPolyMap) -> float:
    """Magnitude reference for declaring a residual 'identically zero'."""
    sys_scale = max(m.fro_norm() for m in system.blocks())
    return mapping.max_abs_coeff() * max(sys_scale, 1.0)


def jacobian_det(mapping: PlanarPolyMap) -> BivariatePoly:
    """det Du = u1_x u2_y - u1_y u2_x, exactly at coefficient level."""
    _check_degree(mapping.u1, 3, "jacobian_det u1")
    _check_degree(mapping.u2, 3, "jacobian_det u2")
    return (
        mapping.u1.diff_x() * mapping.u2.diff_y()
        - mapping.u1.diff_y() * mapping.u2.diff_x()
    )
