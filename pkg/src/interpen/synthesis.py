"""Polynomial solution synthesis for non-decoupling elliptic systems.

For a system that is not equivalent to two copies of one operator there is a
rotation angle theta and a quadratic p (resp. cubic q) making

    u = R_theta (x^2 + y^2, p)       resp.   u = R_theta (x (x^2+y^2), q)

an exact solution.  The coefficient conditions collapse to a small linear
system (-sin(theta) F + cos(theta) G) coeffs = Y(theta) whose matrices F, G
are filled directly from the blocks; theta is chosen to maximize the smallest
singular value.  The right-hand side Y comes from contracting the Hessian of
the leading term into the equations; its formulas are validated by the
residual oracle in the tests rather than trusted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DiagonalizableSystem, IllConditioned, InterpenError, NoFullRankTheta
from .polynomials import (
    BivariatePoly,
    PlanarPolyMap,
    residual_scale,
    system_residual,
)
from .systems import EllipticSystem, classify

#: Rank tolerance: theta passes when sigma_min > RANK_RTOL * sigma_max.
RANK_RTOL = 1e-9

THETA_GRID = 3600
THETA_REFINE_TOL = 1e-10


def build_FG_quadratic(system: EllipticSystem):
    """The 2x3 coefficient matrices of the quadratic synthesis system."""
    a, b, c, d = system.blocks()
    f = np.array([[a.m11, 2.0 * a.m12, a.m22], [c.m11, 2.0 * c.m12, c.m22]])
    g = np.array([[b.m11, 2.0 * b.m12, b.m22], [d.m11, 2.0 * d.m12, d.m22]])
    return f, g


def build_FG_cubic(system: EllipticSystem):
    """The banded 4x4 matrices of the cubic synthesis system.

    Rows 1-2 hold (m11, 2 m12, m22) from A shifted by one column, rows 3-4
    the same from C; G takes B and D.
    """
    a, b, c, d = system.blocks()

    def band(m):
        return np.array(
            [
                [m.m11, 2.0 * m.m12, m.m22, 0.0],
                [0.0, m.m11, 2.0 * m.m12, m.m22],
            ]
        )

    f = np.vstack([band(a), band(c)])
    g = np.vstack([band(b), band(d)])
    return f, g


def rhs_quadratic(system: EllipticSystem, theta: float) -> np.ndarray:
    """Data vector from contracting Hess(x^2+y^2) = 2 Id into the system."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array(
        [
            -2.0 * (c * system.A.trace() + s * system.B.trace()),
            -2.0 * (c * system.C.trace() + s * system.D.trace()),
        ]
    )


def rhs_cubic(system: EllipticSystem, theta: float) -> np.ndarray:
    """Data vector from Hess(x(x^2+y^2)) = x diag(6, 2) + y offdiag(2)."""
    c, s = math.cos(theta), math.sin(theta)
    a, b, cc, d = system.blocks()
    return np.array(
        [
            -(c * (6.0 * a.m11 + 2.0 * a.m22) + s * (6.0 * b.m11 + 2.0 * b.m22)),
            -(c * 4.0 * a.m12 + s * 4.0 * b.m12),
            -(c * (6.0 * cc.m11 + 2.0 * cc.m22) + s * (6.0 * d.m11 + 2.0 * d.m22)),
            -(c * 4.0 * cc.m12 + s * 4.0 * d.m12),
        ]
    )


def _sigma_min_batch(f: np.ndarray, g: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """Smallest singular value of -sin(t) F + cos(t) G for each angle."""
    sin_t = np.sin(thetas)
    cos_t = np.cos(thetas)
    m = -sin_t[:, None, None] * f + cos_t[:, None, None] * g
    if f.shape[0] == 2:
        # closed form through the 2x2 Gram matrix M M^T
        gram = m @ np.swapaxes(m, 1, 2)
        tr = gram[:, 0, 0] + gram[:, 1, 1]
        det = gram[:, 0, 0] * gram[:, 1, 1] - gram[:, 0, 1] * gram[:, 1, 0]
        disc = np.sqrt(np.maximum(0.25 * tr * tr - det, 0.0))
        return np.sqrt(np.maximum(0.5 * tr - disc, 0.0))
    return np.linalg.svd(m, compute_uv=False)[:, -1]


def _sigma_minmax_at(f, g, theta):
    m = -math.sin(theta) * f + math.cos(theta) * g
    sv = np.linalg.svd(m, compute_uv=False)
    return float(sv[-1]), float(sv[0])


def select_theta(f: np.ndarray, g: np.ndarray) -> float:
    """Angle maximizing the smallest singular value of -sin(t) F + cos(t) G.

    Grid scan (first index wins ties) followed by golden-section refinement;
    the grid candidate is kept when refinement does not strictly improve it,
    so symmetric maxima land exactly on grid angles.  Raises NoFullRankTheta
    when even the best angle is rank deficient, which is precisely the
    decoupling alternative.
    """
    thetas = np.linspace(0.0, 2.0 * np.pi, THETA_GRID, endpoint=False)
    sig = _sigma_min_batch(f, g, thetas)
    best_idx = int(np.argmax(sig))
    best_theta = float(thetas[best_idx])
    best_sig = float(sig[best_idx])

    h = 2.0 * np.pi / THETA_GRID
    lo, hi = best_theta - h, best_theta + h
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0

    def val(t):
        return _sigma_min_batch(f, g, np.array([t]))[0]

    x1 = hi - inv_phi * (hi - lo)
    x2 = lo + inv_phi * (hi - lo)
    f1, f2 = val(x1), val(x2)
    while hi - lo > THETA_REFINE_TOL:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv_phi * (hi - lo)
            f2 = val(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv_phi * (hi - lo)
            f1 = val(x1)
        cand_t, cand_f = (x1, f1) if f1 >= f2 else (x2, f2)
        if cand_f > best_sig:
            best_sig, best_theta = float(cand_f), float(cand_t)

    best_theta %= 2.0 * np.pi
    smin, smax = _sigma_minmax_at(f, g, best_theta)
    if smin <= RANK_RTOL * max(smax, 1e-300):
        raise NoFullRankTheta(
            f"synthesis matrix is rank deficient for every angle "
            f"(best sigma_min {smin:.3e} at theta {best_theta:.6f})"
        )
    return best_theta


def quadratic_poly(a: float, b: float, c: float) -> BivariatePoly:
    """p = (a x^2 + 2 b x y + c y^2) / 2."""
    return BivariatePoly({(2, 0): 0.5 * a, (1, 1): b, (0, 2): 0.5 * c})


def cubic_poly(a: float, b: float, c: float, d: float) -> BivariatePoly:
    """q = (a x^3/3 + b x^2 y + c x y^2 + d y^3/3) / 2."""
    return BivariatePoly(
        {(3, 0): a / 6.0, (2, 1): 0.5 * b, (1, 2): 0.5 * c, (0, 3): d / 6.0}
    )


def rotated_pair(first: BivariatePoly, second: BivariatePoly, theta: float) -> PlanarPolyMap:
    """u = R_theta (first, second)."""
    c, s = math.cos(theta), math.sin(theta)
    return PlanarPolyMap(
        u1=first.scaled(c) - second.scaled(s),
        u2=first.scaled(s) + second.scaled(c),
    )


@dataclass(frozen=True)
class QuadraticSolution:
    theta: float
    a: float
    b: float
    c: float
    residual_norm: float

    def p(self) -> BivariatePoly:
        return quadratic_poly(self.a, self.b, self.c)

    def solution_map(self) -> PlanarPolyMap:
        radial = BivariatePoly({(2, 0): 1.0, (0, 2): 1.0})
        return rotated_pair(radial, self.p(), self.theta)

    def to_dict(self) -> dict:
        return {
            "theta": self.theta,
            "p": [self.a, self.b, self.c],
            "residual_norm": self.residual_norm,
        }


@dataclass(frozen=True)
class CubicSolution:
    theta: float
    a: float
    b: float
    c: float
    d: float
    residual_norm: float

    def q(self) -> BivariatePoly:
        return cubic_poly(self.a, self.b, self.c, self.d)

    def solution_map(self) -> PlanarPolyMap:
        radial = BivariatePoly({(3, 0): 1.0, (1, 2): 1.0})
        return rotated_pair(radial, self.q(), self.theta)

    def to_dict(self) -> dict:
        return {
            "theta": self.theta,
            "q": [self.a, self.b, self.c, self.d],
            "residual_norm": self.residual_norm,
        }


def _relative_residual(system, mapping) -> float:
    r1, r2 = system_residual(system, mapping)
    worst = max(r1.max_abs_coeff(), r2.max_abs_coeff())
    return worst / (1.0 + residual_scale(system, mapping))


def _require_not_diagonalizable(system):
    if classify(system).diagonalizable:
        raise DiagonalizableSystem(
            "system decouples into one scalar operator; no counterexample exists"
        )


def synthesize_quadratic(system: EllipticSystem) -> QuadraticSolution:
    """Solve for theta and p making R_theta(x^2+y^2, p) an exact solution.

    The 2x3 solve is underdetermined; the minimum-norm member of the solution
    family is returned (the solve goes through the 2x2 Gram matrix in closed
    form, keeping the pipeline free of LAPACK nondeterminism).
    """
    _require_not_diagonalizable(system)
    f, g = build_FG_quadratic(system)
    try:
        theta = select_theta(f, g)
    except NoFullRankTheta as exc:
        raise IllConditioned(f"classifier and angle scan disagree: {exc}") from exc
    m = -math.sin(theta) * f + math.cos(theta) * g
    y = rhs_quadratic(system, theta)
    gram = m @ m.T
    det = gram[0, 0] * gram[1, 1] - gram[0, 1] * gram[1, 0]
    if det <= 0.0:
        raise IllConditioned("Gram matrix of the synthesis system is singular")
    lam = (
        np.array(
            [
                gram[1, 1] * y[0] - gram[0, 1] * y[1],
                -gram[1, 0] * y[0] + gram[0, 0] * y[1],
            ]
        )
        / det
    )
    coeffs = m.T @ lam

    sol = QuadraticSolution(theta, float(coeffs[0]), float(coeffs[1]), float(coeffs[2]), 0.0)
    resid = _relative_residual(system, sol.solution_map())
    if resid > 1e-10:
        raise InterpenError(f"quadratic synthesis residual {resid:.3e} is not zero")
    return QuadraticSolution(theta, sol.a, sol.b, sol.c, resid)


def synthesize_cubic(system: EllipticSystem) -> CubicSolution:
    """Solve for theta and q making R_theta(x(x^2+y^2), q) an exact solution."""
    _require_not_diagonalizable(system)
    f, g = build_FG_cubic(system)
    try:
        theta = select_theta(f, g)
    except NoFullRankTheta as exc:
        raise IllConditioned(f"classifier and angle scan disagree: {exc}") from exc
    m = -math.sin(theta) * f + math.cos(theta) * g
    y = rhs_cubic(system, theta)
    try:
        coeffs = np.linalg.solve(m, y)
    except np.linalg.LinAlgError as exc:
        raise IllConditioned(f"cubic synthesis matrix is singular: {exc}") from exc

    sol = CubicSolution(
        theta,
        float(coeffs[0]),
        float(coeffs[1]),
        float(coeffs[2]),
        float(coeffs[3]),
        0.0,
    )
    resid = _relative_residual(system, sol.solution_map())
    if resid > 1e-10:
        raise InterpenError(f"cubic synthesis residual {resid:.3e} is not zero")
    return CubicSolution(theta, sol.a, sol.b, sol.c, sol.d, resid)
