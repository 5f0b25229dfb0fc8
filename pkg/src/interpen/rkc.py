"""Injectivity counterexample on a disk with convex boundary image.

For a non-decoupling system, u = R_theta (x^2 + y^2 - 1, k y + p) solves the
system, and on the disk B centered at (1/2, 0) of radius sqrt(5)/2 the
identity x = x^2 + y^2 - 1 turns the boundary restriction into
Phi = R_theta M Psi with M = diag(1, k) and Psi = (x, y + p/k).  For k large
enough Psi(boundary) is a simple closed convex curve, while the image of the
center, u(0,0) = -R_theta M e1, falls outside the vertical strip
(1-sqrt5)/2 <= v1 <= (1+sqrt5)/2 that contains the image of the boundary —
so u cannot be a homeomorphism onto the enclosed convex region.  The failure
is witnessed constructively: the Jacobian 2kx + 2(b(x^2-y^2) + (c-a)xy)
changes sign across a nodal hyperbola through the origin and the map folds,
producing pairs of distant points with equal images.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.spatial import cKDTree

from .errors import KTooSmall, ParameterOutOfRange
from .geometry import (
    ClosedPolyline,
    SignField,
    is_convex,
    is_simple_closed,
    jacobian_sign_field,
    refine_collision_pair,
)
from .polynomials import (
    BivariatePoly,
    PlanarPolyMap,
    jacobian_det,
    poly_is_zero,
    residual_scale,
    system_residual,
)
from .synthesis import quadratic_poly, rotated_pair, synthesize_quadratic
from .systems import EllipticSystem

STRIP_LO = (1.0 - math.sqrt(5.0)) / 2.0
STRIP_HI = (1.0 + math.sqrt(5.0)) / 2.0

DEFAULT_SAMPLES = 4096
DEFAULT_SIGN_GRID = 200
DEFAULT_FOLD_GRID = 128

#: Fold pairs must coincide in the image to this fraction of its diameter.
FOLD_IMAGE_RTOL = 1e-6


@dataclass(frozen=True)
class Disk:
    center: tuple
    radius: float

    def __post_init__(self):
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ParameterOutOfRange(f"disk radius must be positive, got {self.radius}")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))

    def contains(self, x: float, y: float, slack: float = 0.0) -> bool:
        return math.hypot(x - self.center[0], y - self.center[1]) <= self.radius + slack

    def to_dict(self) -> dict:
        return {"center": list(self.center), "radius": self.radius}

    @staticmethod
    def from_dict(d: dict) -> "Disk":
        return Disk((d["center"][0], d["center"][1]), float(d["radius"]))


def counterexample_disk() -> Disk:
    """The disk (x - 1/2)^2 + y^2 < 5/4, on whose boundary x = x^2 + y^2 - 1."""
    return Disk((0.5, 0.0), math.sqrt(5.0) / 2.0)


@dataclass(frozen=True)
class StripCertificate:
    w1: float
    bound: float
    violated: bool
    boundary_in_strip: bool

    def to_dict(self) -> dict:
        return {
            "w1": self.w1,
            "bound": self.bound,
            "violated": self.violated,
            "boundary_in_strip": self.boundary_in_strip,
        }


@dataclass(frozen=True)
class FoldPair:
    p: tuple
    q: tuple
    image_distance: float
    domain_distance: float

    def to_dict(self) -> dict:
        return {
            "p": list(self.p),
            "q": list(self.q),
            "image_distance": self.image_distance,
            "domain_distance": self.domain_distance,
        }


@dataclass(frozen=True)
class RkcCertificates:
    boundary_simple: bool
    boundary_convex: bool
    strip: StripCertificate
    jacobian_center_zero: bool
    jacobian_matches_closed_form: bool
    jacobian_signs: SignField
    fold: FoldPair | None

    def all_pass(self) -> bool:
        return (
            self.boundary_simple
            and self.boundary_convex
            and self.strip.violated
            and self.strip.boundary_in_strip
            and self.jacobian_center_zero
            and self.jacobian_matches_closed_form
            and self.jacobian_signs.positive > 0
            and self.jacobian_signs.negative > 0
            and self.fold is not None
        )

    def to_dict(self) -> dict:
        return {
            "boundary_simple": self.boundary_simple,
            "boundary_convex": self.boundary_convex,
            "strip": self.strip.to_dict(),
            "jacobian_center_zero": self.jacobian_center_zero,
            "jacobian_matches_closed_form": self.jacobian_matches_closed_form,
            "jacobian_signs": self.jacobian_signs.to_dict(),
            "fold": None if self.fold is None else self.fold.to_dict(),
            "all_pass": self.all_pass(),
        }


@dataclass(frozen=True)
class RkcBundle:
    system: EllipticSystem
    theta: float
    p_coeffs: tuple  # (a, b, c)
    k: float
    disk: Disk
    n_samples: int
    map: PlanarPolyMap
    boundary: ClosedPolyline
    certificates: RkcCertificates
    residual_norm: float

    def to_dict(self) -> dict:
        return {
            "kind": "rkc",
            "system": self.system.to_dict(),
            "theta": self.theta,
            "p": list(self.p_coeffs),
            "k": self.k,
            "disk": self.disk.to_dict(),
            "n_samples": self.n_samples,
            "map": self.map.to_dict(),
            "boundary_samples": self.boundary.vertices.tolist(),
            "certificates": self.certificates.to_dict(),
            "residual_norm": self.residual_norm,
        }


def default_k(b: float) -> float:
    """Strictly above |b| so the Jacobian sign pattern at (+-1, 0) is strict."""
    if b == 0.0:
        return 1.0
    return abs(b) + max(1e-3 * abs(b), 1e-3)


def assemble_rkc_map(theta: float, p_coeffs, k: float) -> PlanarPolyMap:
    """u = R_theta (x^2 + y^2 - 1, k y + p)."""
    a, b, c = p_coeffs
    first = BivariatePoly({(2, 0): 1.0, (0, 2): 1.0, (0, 0): -1.0})
    second = BivariatePoly({(0, 1): k}) + quadratic_poly(a, b, c)
    return rotated_pair(first, second, theta)


def boundary_polyline(mapping: PlanarPolyMap, disk: Disk, n: int) -> ClosedPolyline:
    """Image of the disk boundary at n uniform angles."""
    t = 2.0 * np.pi * np.arange(n) / n
    xs = disk.center[0] + disk.radius * np.cos(t)
    ys = disk.center[1] + disk.radius * np.sin(t)
    return ClosedPolyline(mapping.evaluate_many(xs, ys))


def nodal_det_closed_form(p_coeffs, k: float) -> BivariatePoly:
    """2 k x + 2 (b (x^2 - y^2) + (c - a) x y)."""
    a, b, c = p_coeffs
    return BivariatePoly(
        {(1, 0): 2.0 * k, (2, 0): 2.0 * b, (0, 2): -2.0 * b, (1, 1): 2.0 * (c - a)}
    )


@dataclass(frozen=True)
class NodalConic:
    """Zero set of k x + b (x^2 - y^2) + (c - a) x y, the Jacobian nodal line."""

    a: float
    b: float
    c: float
    k: float
    kind: str  # "hyperbola" | "line"

    def value(self, x: float, y: float) -> float:
        return self.k * x + self.b * (x * x - y * y) + (self.c - self.a) * x * y

    def branch_through_origin(self, disk: Disk, n: int = 512) -> np.ndarray:
        """Points of the branch passing through the origin, inside the disk."""
        cy, r = disk.center[1], disk.radius
        ys = np.linspace(cy - r, cy + r, 4 * n)
        tol = 1e-12 * (1.0 + max(abs(self.a), abs(self.b), abs(self.c)))
        if abs(self.b) <= tol:
            xs = np.zeros_like(ys)
        else:
            bb = (self.c - self.a) * ys + self.k
            disc = np.sqrt(bb * bb + 4.0 * self.b * self.b * ys * ys)
            sk = 1.0 if self.k >= 0.0 else -1.0
            xs = np.where(
                sk * bb > 0.0,
                2.0 * self.b * ys * ys / (bb + sk * disc),
                (-bb + sk * disc) / (2.0 * self.b),
            )
        inside = (xs - disk.center[0]) ** 2 + (ys - cy) ** 2 <= r * r
        pts = np.stack([xs[inside], ys[inside]], axis=1)
        return pts[:: max(1, pts.shape[0] // n)]

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "k": self.k, "kind": self.kind}


def nodal_conic(p_coeffs, k: float) -> NodalConic:
    """Classify the Jacobian nodal line: hyperbola, or the line x = 0 when the
    quadratic part vanishes."""
    a, b, c = (float(v) for v in p_coeffs)
    tol = 1e-12 * (1.0 + max(abs(a), abs(b), abs(c)))
    degenerate = abs(b) <= tol and abs(c - a) <= tol
    return NodalConic(a, b, c, float(k), "line" if degenerate else "hyperbola")


def strip_certificate(bundle: RkcBundle) -> StripCertificate:
    """Check that the center's image escapes the strip containing the target.

    w = M^-1 R_{-theta} u(0,0) must satisfy w1 < (1-sqrt5)/2 while every
    boundary sample pulled back the same way stays inside
    [(1-sqrt5)/2, (1+sqrt5)/2].
    """
    c, s = math.cos(bundle.theta), math.sin(bundle.theta)
    u0 = bundle.map.evaluate(0.0, 0.0)
    w1_center = (c * u0[0] + s * u0[1]) / 1.0  # M = diag(1, k): first row unscaled

    v = bundle.boundary.vertices
    w1 = c * v[:, 0] + s * v[:, 1]
    tol = 1e-12 * (STRIP_HI - STRIP_LO + 1.0)
    inside = bool(np.all((w1 >= STRIP_LO - tol) & (w1 <= STRIP_HI + tol)))

    return StripCertificate(
        w1=float(w1_center),
        bound=STRIP_LO,
        violated=bool(w1_center < STRIP_LO),
        boundary_in_strip=inside,
    )


def fold_certificate(bundle: RkcBundle, grid_n: int = DEFAULT_FOLD_GRID) -> FoldPair | None:
    """Search for two distant domain points with (numerically) equal images.

    A deterministic polar grid proposes the closest image pairs at domain
    distance above radius/10; Gauss-Newton refinement then drives the image
    gap below FOLD_IMAGE_RTOL times the image diameter.  Returns None when no
    such pair survives (e.g. for injective maps, where refinement collapses
    every candidate onto the diagonal P = Q).
    """
    disk = bundle.disk
    xs, ys = _fold_grid(disk, grid_n)
    domain = np.stack([xs, ys], axis=1)
    images = bundle.map.evaluate_many(xs, ys)
    span = images.max(axis=0) - images.min(axis=0)
    diam = float(math.hypot(span[0], span[1]))
    min_domain = disk.radius / 10.0

    tree = cKDTree(images)
    kq = min(10, images.shape[0])
    dists, nbrs = tree.query(images, k=kq)
    candidates = []
    for col in range(1, kq):
        dd = np.linalg.norm(domain - domain[nbrs[:, col]], axis=1)
        ok = dd > min_domain
        if not np.any(ok):
            continue
        cand = np.nonzero(ok)[0]
        local = cand[int(np.argmin(dists[cand, col]))]
        candidates.append((float(dists[local, col]), int(local), int(nbrs[local, col])))
    candidates.sort()

    tol = FOLD_IMAGE_RTOL * diam
    for _, i, j in candidates[:4]:
        confirmed = refine_collision_pair(
            bundle.map, domain[i], domain[j], disk, tol, min_domain
        )
        if confirmed is not None:
            p, q, image_dist, domain_dist = confirmed
            return FoldPair(p, q, image_dist, domain_dist)
    return None


def _fold_grid(disk: Disk, n: int):
    radii = disk.radius * (np.arange(1, n + 1) - 0.5) / n
    angles = 2.0 * np.pi * np.arange(n) / n
    rr, tt = np.meshgrid(radii, angles, indexing="ij")
    xs = disk.center[0] + rr * np.cos(tt)
    ys = disk.center[1] + rr * np.sin(tt)
    return xs.ravel(), ys.ravel()


def compute_certificates(
    bundle: RkcBundle,
    sign_grid_n: int = DEFAULT_SIGN_GRID,
    fold_grid_n: int = DEFAULT_FOLD_GRID,
) -> RkcCertificates:
    """Recompute every certificate of the bundle from its primitives."""
    simple = is_simple_closed(bundle.boundary)
    convex = is_convex(bundle.boundary) if simple else False

    det = jacobian_det(bundle.map)
    closed = nodal_det_closed_form(bundle.p_coeffs, bundle.k)
    diff = det - closed
    scale = 1.0 + max(det.max_abs_coeff(), closed.max_abs_coeff())
    matches = diff.max_abs_coeff() <= 1e-12 * scale
    center_zero = det.coeff(0, 0) == 0.0

    signs = jacobian_sign_field(det, bundle.disk, sign_grid_n)
    fold = fold_certificate(bundle, fold_grid_n)
    return RkcCertificates(
        boundary_simple=simple,
        boundary_convex=convex,
        strip=strip_certificate(bundle),
        jacobian_center_zero=center_zero,
        jacobian_matches_closed_form=matches,
        jacobian_signs=signs,
        fold=fold,
    )


def _build_at_k(system, sol, k, n_samples, sign_grid_n, fold_grid_n) -> RkcBundle:
    p_coeffs = (sol.a, sol.b, sol.c)
    mapping = assemble_rkc_map(sol.theta, p_coeffs, k)
    disk = counterexample_disk()
    boundary = boundary_polyline(mapping, disk, n_samples)

    r1, r2 = system_residual(system, mapping)
    resid = max(r1.max_abs_coeff(), r2.max_abs_coeff()) / (
        1.0 + residual_scale(system, mapping)
    )

    bundle = RkcBundle(
        system=system,
        theta=sol.theta,
        p_coeffs=p_coeffs,
        k=k,
        disk=disk,
        n_samples=n_samples,
        map=mapping,
        boundary=boundary,
        certificates=None,  # filled below
        residual_norm=resid,
    )
    certs = compute_certificates(bundle, sign_grid_n, fold_grid_n)
    return replace(bundle, certificates=certs)


def build_rkc_counterexample(
    system: EllipticSystem,
    k: float | None = None,
    n_samples: int = DEFAULT_SAMPLES,
    sign_grid_n: int = DEFAULT_SIGN_GRID,
    fold_grid_n: int = DEFAULT_FOLD_GRID,
) -> RkcBundle:
    """Synthesize the quadratic solution and certify its non-injectivity.

    Raises DiagonalizableSystem when no counterexample exists and KTooSmall
    when an explicit k is below |b| (or zero).  With no explicit k, the
    default starts strictly above |b| and doubles until the boundary image is
    a simple convex curve — large k flattens p/k away, so such a k always
    exists — keeping defaults usable for any admissible system.  Certificates
    are computed, not asserted: a bundle whose certificates fail (possible
    with an explicit k) is still returned; the CLI maps that to exit code 2.
    """
    sol = synthesize_quadratic(system)
    if k is not None:
        k = float(k)
        if k == 0.0 or k < abs(sol.b):
            raise KTooSmall(f"need k >= |b| = {abs(sol.b):.6g} and k != 0, got {k}")
        return _build_at_k(system, sol, k, n_samples, sign_grid_n, fold_grid_n)

    k = default_k(sol.b)
    bundle = _build_at_k(system, sol, k, n_samples, sign_grid_n, fold_grid_n)
    for _ in range(24):
        certs = bundle.certificates
        if certs.boundary_simple and certs.boundary_convex:
            break
        k *= 2.0
        bundle = _build_at_k(system, sol, k, n_samples, sign_grid_n, fold_grid_n)
    return bundle


def bundle_from_dict(d: dict) -> RkcBundle:
    """Rebuild a bundle exactly as stored (no recomputation)."""
    certs = d["certificates"]
    strip = StripCertificate(
        w1=certs["strip"]["w1"],
        bound=certs["strip"]["bound"],
        violated=certs["strip"]["violated"],
        boundary_in_strip=certs["strip"]["boundary_in_strip"],
    )
    fold = None
    if certs.get("fold") is not None:
        f = certs["fold"]
        fold = FoldPair(
            tuple(f["p"]), tuple(f["q"]), f["image_distance"], f["domain_distance"]
        )
    signs = SignField(
        certs["jacobian_signs"]["positive"],
        certs["jacobian_signs"]["negative"],
        certs["jacobian_signs"]["near_zero"],
    )
    return RkcBundle(
        system=EllipticSystem.from_dict(d["system"]),
        theta=float(d["theta"]),
        p_coeffs=tuple(float(v) for v in d["p"]),
        k=float(d["k"]),
        disk=Disk.from_dict(d["disk"]),
        n_samples=int(d["n_samples"]),
        map=PlanarPolyMap.from_dict(d["map"]),
        boundary=ClosedPolyline(np.array(d["boundary_samples"])),
        certificates=RkcCertificates(
            boundary_simple=certs["boundary_simple"],
            boundary_convex=certs["boundary_convex"],
            strip=strip,
            jacobian_center_zero=certs["jacobian_center_zero"],
            jacobian_matches_closed_form=certs["jacobian_matches_closed_form"],
            jacobian_signs=signs,
            fold=fold,
        ),
        residual_norm=float(d["residual_norm"]),
    )


def verify_bundle(bundle: RkcBundle, sign_grid_n: int = DEFAULT_SIGN_GRID) -> dict:
    """Re-derive everything checkable from the bundle's primitives.

    Validates the structural invariants (k admissible, map matches (theta,
    p, k), zero residual, boundary samples reproducible) and recomputes every
    certificate, reporting mismatches against the stored booleans.
    """
    report = {"ok": True, "checks": {}}

    def check(name, ok):
        report["checks"][name] = bool(ok)
        if not ok:
            report["ok"] = False

    a, b, c = bundle.p_coeffs
    check("k_admissible", bundle.k != 0.0 and bundle.k >= abs(b))

    expected_map = assemble_rkc_map(bundle.theta, bundle.p_coeffs, bundle.k)
    diff_max = max(
        (bundle.map.u1 - expected_map.u1).max_abs_coeff(),
        (bundle.map.u2 - expected_map.u2).max_abs_coeff(),
    )
    check("map_matches_parameters", diff_max <= 1e-12 * (1.0 + bundle.map.max_abs_coeff()))

    r1, r2 = system_residual(bundle.system, bundle.map)
    scale = residual_scale(bundle.system, bundle.map)
    check("residual_zero", poly_is_zero(r1, scale) and poly_is_zero(r2, scale))

    expected_boundary = boundary_polyline(bundle.map, bundle.disk, bundle.n_samples)
    check(
        "boundary_reproducible",
        np.allclose(expected_boundary.vertices, bundle.boundary.vertices, atol=1e-9),
    )

    recomputed = compute_certificates(bundle, sign_grid_n)
    stored = bundle.certificates
    check("boundary_simple", recomputed.boundary_simple == stored.boundary_simple)
    check("boundary_convex", recomputed.boundary_convex == stored.boundary_convex)
    check("strip_violated", recomputed.strip.violated == stored.strip.violated)
    check(
        "strip_boundary",
        recomputed.strip.boundary_in_strip == stored.strip.boundary_in_strip,
    )
    check(
        "jacobian_center_zero",
        recomputed.jacobian_center_zero == stored.jacobian_center_zero,
    )
    check(
        "jacobian_closed_form",
        recomputed.jacobian_matches_closed_form == stored.jacobian_matches_closed_form,
    )
    check(
        "jacobian_signs",
        (recomputed.jacobian_signs.positive > 0)
        == (stored.jacobian_signs.positive > 0)
        and (recomputed.jacobian_signs.negative > 0)
        == (stored.jacobian_signs.negative > 0),
    )
    check("fold", (recomputed.fold is None) == (stored.fold is None))
    check("certificates_pass", recomputed.all_pass())
    return report
