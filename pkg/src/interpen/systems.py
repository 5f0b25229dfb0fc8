"""Coefficient algebra for planar constant-coefficient elliptic systems.

A system is the quadruple (A, B, C, D) of symmetric 2x2 matrices in

    div(A grad u1 + B grad u2) = 0,
    div(C grad u1 + D grad u2) = 0.

This module decides ellipticity (the Legendre-Hadamard condition), strong
convexity (positivity of the 4x4 block matrix), and the key dichotomy:
whether the system is equivalent, under an invertible block-scalar mixing of
the two equations, to two decoupled copies of a single scalar operator.  The
decoupled class is exactly where the classical injectivity theorems for
planar harmonic mappings survive; everything else admits the counterexamples
built in the sibling modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    NonFiniteInput,
    NotElliptic,
    ParameterOutOfRange,
    SingularMixing,
)

#: Relative tolerance for "X is a scalar multiple of A" decisions.
SPAN_RTOL = 1e-9

#: Number of direction samples for the ellipticity margin scan.
ELLIPTICITY_SAMPLES = 10_000


@dataclass(frozen=True)
class SymMat2:
    """Symmetric 2x2 matrix stored as its upper triangle (m11, m12, m22)."""

    m11: float
    m12: float
    m22: float

    def __post_init__(self):
        if not (
            math.isfinite(self.m11)
            and math.isfinite(self.m12)
            and math.isfinite(self.m22)
        ):
            raise NonFiniteInput(f"non-finite matrix entries: {self}")

    @staticmethod
    def identity() -> "SymMat2":
        return SymMat2(1.0, 0.0, 1.0)

    @staticmethod
    def zero() -> "SymMat2":
        return SymMat2(0.0, 0.0, 0.0)

    @staticmethod
    def diag(d1: float, d2: float) -> "SymMat2":
        return SymMat2(d1, 0.0, d2)

    @staticmethod
    def offdiag(m12: float) -> "SymMat2":
        return SymMat2(0.0, m12, 0.0)

    @staticmethod
    def from_array(a) -> "SymMat2":
        """Build from a 2x2 array; asymmetric input is rejected, not averaged."""
        a = np.asarray(a, dtype=float)
        if a.shape != (2, 2):
            raise ValueError(f"expected 2x2 array, got shape {a.shape}")
        if a[0, 1] != a[1, 0]:
            raise ValueError("matrix is not symmetric; symmetrize explicitly first")
        return SymMat2(float(a[0, 0]), float(a[0, 1]), float(a[1, 1]))

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m12, self.m22]])

    def trace(self) -> float:
        return self.m11 + self.m22

    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m12

    def qform(self, x: float, y: float) -> float:
        """Quadratic form M xi . xi for xi = (x, y)."""
        return self.m11 * x * x + 2.0 * self.m12 * x * y + self.m22 * y * y

    def fro_inner(self, other: "SymMat2") -> float:
        """Frobenius inner product (the off-diagonal counts twice)."""
        return (
            self.m11 * other.m11
            + 2.0 * self.m12 * other.m12
            + self.m22 * other.m22
        )

    def fro_norm(self) -> float:
        return math.sqrt(self.fro_inner(self))

    def scaled(self, s: float) -> "SymMat2":
        return SymMat2(s * self.m11, s * self.m12, s * self.m22)

    def __add__(self, other: "SymMat2") -> "SymMat2":
        return SymMat2(self.m11 + other.m11, self.m12 + other.m12, self.m22 + other.m22)

    def __sub__(self, other: "SymMat2") -> "SymMat2":
        return SymMat2(self.m11 - other.m11, self.m12 - other.m12, self.m22 - other.m22)

    def triple(self) -> list:
        return [self.m11, self.m12, self.m22]


@dataclass(frozen=True)
class EllipticSystem:
    """The coefficient quadruple (A, B, C, D).

    Construction does not validate ellipticity; call :func:`is_elliptic` (the
    named constructors :func:`lame`, :func:`laplacian`,
    :func:`perturbed_laplacian` always produce elliptic systems).
    """

    A: SymMat2
    B: SymMat2
    C: SymMat2
    D: SymMat2

    def blocks(self):
        return (self.A, self.B, self.C, self.D)

    def block_matrix(self) -> np.ndarray:
        """The 4x4 block matrix (A, B; C, D)."""
        top = np.hstack([self.A.as_array(), self.B.as_array()])
        bot = np.hstack([self.C.as_array(), self.D.as_array()])
        return np.vstack([top, bot])

    def to_dict(self) -> dict:
        return {
            "A": self.A.triple(),
            "B": self.B.triple(),
            "C": self.C.triple(),
            "D": self.D.triple(),
        }

    @staticmethod
    def from_dict(d: dict) -> "EllipticSystem":
        mats = {}
        for key in ("A", "B", "C", "D"):
            triple = d[key]
            if len(triple) != 3:
                raise ValueError(f"block {key}: expected [m11, m12, m22]")
            mats[key] = SymMat2(float(triple[0]), float(triple[1]), float(triple[2]))
        return EllipticSystem(mats["A"], mats["B"], mats["C"], mats["D"])


@dataclass(frozen=True)
class Mixing:
    """Invertible 2x2 matrix acting on the pair of equations.

    The action on a system (A', B'; C', D') is left block-scalar
    multiplication: (alpha A' + beta C', alpha B' + beta D';
    gamma A' + delta C', gamma B' + delta D').
    """

    alpha: float
    beta: float
    gamma: float
    delta: float

    def __post_init__(self):
        if not all(
            math.isfinite(v) for v in (self.alpha, self.beta, self.gamma, self.delta)
        ):
            raise NonFiniteInput("non-finite mixing entries")
        scale = max(abs(self.alpha), abs(self.beta), abs(self.gamma), abs(self.delta))
        if abs(self.det()) <= 1e-14 * max(scale * scale, 1e-300):
            raise SingularMixing(f"mixing determinant is numerically zero: {self}")

    @staticmethod
    def identity() -> "Mixing":
        return Mixing(1.0, 0.0, 0.0, 1.0)

    def det(self) -> float:
        return self.alpha * self.delta - self.beta * self.gamma

    def inverse(self) -> "Mixing":
        d = self.det()
        return Mixing(self.delta / d, -self.beta / d, -self.gamma / d, self.alpha / d)


@dataclass(frozen=True)
class EllipticityVerdict:
    """Result of the Legendre-Hadamard scan.

    ``margin`` is the minimum over sampled directions xi of

        min(A xi.xi,  D xi.xi,  4 (A xi.xi)(D xi.xi) - ((B+C) xi.xi)^2),

    i.e. positive definiteness of the quadratic form in eta for every xi.
    ``cert_slack`` bounds how much the true minimum over the continuum can
    undershoot the sampled one (angular Lipschitz bound times half the grid
    step); ``margin > cert_slack`` certifies ellipticity, ``margin <= 0``
    certifies its failure at the witness directions.
    """

    elliptic: bool
    margin: float
    cert_slack: float
    witness: tuple | None  # (xi angle, eta angle) violating positivity

    def certified(self) -> bool:
        return self.margin > self.cert_slack or self.margin <= 0.0


def _trig_amplitude(m: SymMat2):
    """Mean and amplitude of t -> M xi(t).xi(t) = mean + amp*cos(2t - phase)."""
    mean = 0.5 * (m.m11 + m.m22)
    amp = math.hypot(0.5 * (m.m11 - m.m22), m.m12)
    return mean, amp


def margin_lipschitz_bound(system: EllipticSystem) -> float:
    """Bound on |d/dt| of the per-direction margin integrand.

    Each block form f_M(t) is a degree-2 trig polynomial with |f'| <= 2*amp
    and |f| <= |mean| + amp; the discriminant 4 f_A f_D - f_{B+C}^2 then has
    derivative bounded by 4(L_A M_D + M_A L_D) + 2 M_S L_S.
    """
    mean_a, amp_a = _trig_amplitude(system.A)
    mean_d, amp_d = _trig_amplitude(system.D)
    mean_s, amp_s = _trig_amplitude(system.B + system.C)
    m_a, l_a = abs(mean_a) + amp_a, 2.0 * amp_a
    m_d, l_d = abs(mean_d) + amp_d, 2.0 * amp_d
    m_s, l_s = abs(mean_s) + amp_s, 2.0 * amp_s
    l_disc = 4.0 * (l_a * m_d + m_a * l_d) + 2.0 * m_s * l_s
    return max(l_a, l_d, l_disc)


def _form_samples(m: SymMat2, cos_t, sin_t):
    return m.m11 * cos_t * cos_t + 2.0 * m.m12 * cos_t * sin_t + m.m22 * sin_t * sin_t


def is_elliptic(system: EllipticSystem, n_samples: int = ELLIPTICITY_SAMPLES) -> EllipticityVerdict:
    """Decide the Legendre-Hadamard condition by a certified angular scan.

    For each sampled unit xi the condition is positive definiteness of the
    2x2 form in eta with entries (A xi.xi, (B+C) xi.xi / 2; ., D xi.xi),
    decided in closed form; the minimum over xi is certified against grid
    undersampling through :func:`margin_lipschitz_bound`.
    """
    t = np.linspace(0.0, 2.0 * np.pi, n_samples, endpoint=False)
    cos_t, sin_t = np.cos(t), np.sin(t)
    f_a = _form_samples(system.A, cos_t, sin_t)
    f_d = _form_samples(system.D, cos_t, sin_t)
    f_s = _form_samples(system.B + system.C, cos_t, sin_t)
    disc = 4.0 * f_a * f_d - f_s * f_s
    per_xi = np.minimum(np.minimum(f_a, f_d), disc)
    idx = int(np.argmin(per_xi))
    margin = float(per_xi[idx])
    slack = margin_lipschitz_bound(system) * (np.pi / n_samples)

    witness = None
    if margin <= 0.0:
        # eta minimizing the per-xi form: eigenvector of the smallest
        # eigenvalue of [[f_a, f_s/2], [f_s/2, f_d]].
        fa, fd, fs = float(f_a[idx]), float(f_d[idx]), float(f_s[idx])
        half = 0.5 * fs
        lam_min = 0.5 * (fa + fd) - math.hypot(0.5 * (fa - fd), half)
        if abs(half) > 0.0 or fa != fd:
            eta_angle = math.atan2(lam_min - fa, half) if half != 0.0 else (
                0.0 if fa <= fd else 0.5 * math.pi
            )
        else:
            eta_angle = 0.0
        witness = (float(t[idx]), float(eta_angle))

    return EllipticityVerdict(
        elliptic=margin > 0.0, margin=margin, cert_slack=float(slack), witness=witness
    )


def is_strongly_convex(system: EllipticSystem) -> bool:
    """Positivity of the quadratic form of the 4x4 block matrix (A, B; C, D).

    The form only sees the symmetric part, so the test runs on (M + M^T)/2;
    with B = C this is M itself.  Semidefinite boundary cases are accepted:
    the isotropic elasticity system with equal moduli lands exactly on the
    boundary (one eigenvalue is 0), and only genuinely indefinite forms are
    rejected.
    """
    m = system.block_matrix()
    sym = 0.5 * (m + m.T)
    eigs = np.linalg.eigvalsh(sym)
    scale = max(float(np.abs(sym).max()), 1e-300)
    return bool(eigs[0] >= -1e-12 * scale)


@dataclass(frozen=True)
class Classification:
    """Outcome of the equivalence test against decoupled diagonal form.

    ``diagonalizable`` is true when B, C, D are all scalar multiples of A;
    then ``mixing`` = (1, sigma_B; sigma_C, sigma_D) maps the decoupled pair
    (A, 0; 0, A) onto the given system and ``base`` is A.  Otherwise the
    scalar-dependence ``residuals`` record how far each block is from span{A}
    (relative Frobenius distance).
    """

    diagonalizable: bool
    residuals: dict
    scalars: tuple | None = None  # (sigma_B, sigma_C, sigma_D)
    mixing: Mixing | None = None
    base: SymMat2 | None = None

    @property
    def variant(self) -> str:
        return "Diagonalizable" if self.diagonalizable else "NotDiagonalizable"

    def to_dict(self) -> dict:
        out = {"variant": self.variant, "residuals": self.residuals}
        if self.diagonalizable:
            out["scalars"] = {
                "sigma_B": self.scalars[0],
                "sigma_C": self.scalars[1],
                "sigma_D": self.scalars[2],
            }
            out["mixing"] = [
                self.mixing.alpha,
                self.mixing.beta,
                self.mixing.gamma,
                self.mixing.delta,
            ]
            out["base"] = self.base.triple()
        return out


def classify(system: EllipticSystem) -> Classification:
    """Decide whether the system is equivalent to two copies of one operator.

    Raises NotElliptic when the Legendre-Hadamard scan fails; ellipticity
    guarantees A is positive definite, hence nonzero, so projection onto
    span{A} is well defined, and it forces sigma_D - sigma_B*sigma_C > 0 so
    the returned mixing is automatically invertible.
    """
    verdict = is_elliptic(system)
    if not verdict.elliptic:
        raise NotElliptic(f"margin {verdict.margin:.3e} at witness {verdict.witness}")

    a = system.A
    gram = a.fro_inner(a)
    scalars = {}
    residuals = {}
    ok = True
    for name, block in (("B", system.B), ("C", system.C), ("D", system.D)):
        sigma = block.fro_inner(a) / gram
        resid = (block - a.scaled(sigma)).fro_norm()
        rel = resid / max(block.fro_norm() + a.fro_norm(), 1e-300)
        scalars[name] = sigma
        residuals[name] = rel
        if resid > SPAN_RTOL * (block.fro_norm() + a.fro_norm()):
            ok = False

    if not ok:
        return Classification(diagonalizable=False, residuals=residuals)

    sb, sc, sd = scalars["B"], scalars["C"], scalars["D"]
    assert sd - sb * sc > 0.0, "ellipticity must make the recovered mixing invertible"
    mixing = Mixing(1.0, sb, sc, sd)
    return Classification(
        diagonalizable=True,
        residuals=residuals,
        scalars=(sb, sc, sd),
        mixing=mixing,
        base=a,
    )


def apply_mixing(system: EllipticSystem, mixing: Mixing) -> EllipticSystem:
    """Left block-scalar action of the mixing on the pair of equations.

    Preserves the solution set (each new equation is a combination of the old
    ones) and round-trips with ``mixing.inverse()``.
    """
    a, b, c, d = system.blocks()
    al, be, ga, de = mixing.alpha, mixing.beta, mixing.gamma, mixing.delta
    return EllipticSystem(
        A=a.scaled(al) + c.scaled(be),
        B=b.scaled(al) + d.scaled(be),
        C=a.scaled(ga) + c.scaled(de),
        D=b.scaled(ga) + d.scaled(de),
    )


def lame(mu: float, lam: float) -> EllipticSystem:
    """The planar isotropic elasticity system with moduli (mu, lambda).

    Requires mu > 0 and mu + lambda > 0 (equivalently, strong convexity).
    """
    if not (math.isfinite(mu) and math.isfinite(lam)):
        raise NonFiniteInput("non-finite Lame moduli")
    if mu <= 0.0 or mu + lam <= 0.0:
        raise ParameterOutOfRange(f"need mu > 0 and mu + lambda > 0, got ({mu}, {lam})")
    half = 0.5 * (mu + lam)
    return EllipticSystem(
        A=SymMat2.diag(2.0 * mu + lam, mu),
        B=SymMat2.offdiag(half),
        C=SymMat2.offdiag(half),
        D=SymMat2.diag(mu, 2.0 * mu + lam),
    )


def laplacian() -> EllipticSystem:
    """Two decoupled Laplace equations (the classical harmonic-mapping case)."""
    return EllipticSystem(
        A=SymMat2.identity(), B=SymMat2.zero(), C=SymMat2.zero(), D=SymMat2.identity()
    )


def perturbed_laplacian(epsilon: float) -> EllipticSystem:
    """Laplace on u1 and (1+eps) u2_xx + u2_yy = 0 on u2.

    For any epsilon > 0 this leaves the decoupled-equal-operator class, so
    the counterexample pipelines apply despite the arbitrarily small
    perturbation.
    """
    if not math.isfinite(epsilon):
        raise NonFiniteInput("non-finite epsilon")
    if epsilon <= 0.0:
        raise ParameterOutOfRange("epsilon must be positive")
    return EllipticSystem(
        A=SymMat2.identity(),
        B=SymMat2.zero(),
        C=SymMat2.zero(),
        D=SymMat2.diag(1.0 + epsilon, 1.0),
    )
