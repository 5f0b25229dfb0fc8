"""Degenerate-Jacobian homeomorphism: the converse counterexample.

For a non-decoupling system, u = R_theta (x (x^2 + y^2), y + q) is an exact
polynomial solution whose Jacobian vanishes at the origin (the determinant
polynomial has no constant term) yet stays positive on a punctured disk
around it: the leading behaviour is 3x^2 + y^2.  On a radius rho small
enough that additionally 2 + b rho^2 > 0 and 3 + d rho^2 > 0, the boundary
restriction is injective, and a map that is a local homeomorphism away from
one point with injective boundary is a global homeomorphism; we certify that
conclusion numerically (simple boundary image, winding number +1 around
interior image probes, no grid collisions) instead of invoking topology.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .errors import NoPositiveRadius
from .geometry import (
    ClosedPolyline,
    InjectivityVerdict,
    grid_injectivity,
    is_simple_closed,
    winding_numbers,
)
from .polynomials import (
    BivariatePoly,
    PlanarPolyMap,
    jacobian_det,
    poly_is_zero,
    residual_scale,
    system_residual,
)
from .rkc import Disk, boundary_polyline
from .synthesis import cubic_poly, rotated_pair, synthesize_cubic
from .systems import EllipticSystem

DEFAULT_SAMPLES = 4096
DEFAULT_PROBES = 100
DEFAULT_POSITIVITY_GRID = 128

#: Geometric schedule for the positivity-radius search.
RADIUS_START = 1.0
RADIUS_FACTOR = 0.9
RADIUS_MAX_STEPS = 100
RADIUS_SAFETY = 0.9


@dataclass(frozen=True)
class LewyCertificates:
    center_jacobian_zero: bool
    punctured_positivity: bool
    boundary_simple: bool
    winding_ok: bool
    injective: bool
    inequality_margins: tuple  # (2 + b rho^2, 3 + d rho^2)

    def all_pass(self) -> bool:
        return (
            self.center_jacobian_zero
            and self.punctured_positivity
            and self.boundary_simple
            and self.winding_ok
            and self.injective
            and self.inequality_margins[0] > 0.0
            and self.inequality_margins[1] > 0.0
        )

    def to_dict(self) -> dict:
        return {
            "center_jacobian_zero": self.center_jacobian_zero,
            "punctured_positivity": self.punctured_positivity,
            "boundary_simple": self.boundary_simple,
            "winding_ok": self.winding_ok,
            "injective": self.injective,
            "inequality_margins": list(self.inequality_margins),
            "all_pass": self.all_pass(),
        }


@dataclass(frozen=True)
class LewyBundle:
    system: EllipticSystem
    theta: float
    q_coeffs: tuple  # (a, b, c, d)
    r: float
    rho: float
    map: PlanarPolyMap
    n_samples: int
    boundary: ClosedPolyline
    certificates: LewyCertificates
    residual_norm: float

    def disk(self) -> Disk:
        return Disk((0.0, 0.0), self.rho)

    def to_dict(self) -> dict:
        return {
            "kind": "lewy",
            "system": self.system.to_dict(),
            "theta": self.theta,
            "q": list(self.q_coeffs),
            "r": self.r,
            "rho": self.rho,
            "n_samples": self.n_samples,
            "map": self.map.to_dict(),
            "boundary_samples": self.boundary.vertices.tolist(),
            "certificates": self.certificates.to_dict(),
            "residual_norm": self.residual_norm,
        }


def assemble_lewy_map(theta: float, q_coeffs) -> PlanarPolyMap:
    """u = R_theta (x (x^2 + y^2), y + q)."""
    a, b, c, d = q_coeffs
    first = BivariatePoly({(3, 0): 1.0, (1, 2): 1.0})
    second = BivariatePoly({(0, 1): 1.0}) + cubic_poly(a, b, c, d)
    return rotated_pair(first, second, theta)


def find_positivity_radius(mapping: PlanarPolyMap) -> float:
    """Largest scheduled radius with det Du > 0 on the punctured polar grid.

    Walks 1.0, 0.9, 0.81, ... and returns the first radius whose
    720-angle x 50-radius grid (center excluded) is strictly positive, shrunk
    by the safety factor 0.9.  Raises NoPositiveRadius when the schedule is
    exhausted, which signals a mis-assembled map.
    """
    det = jacobian_det(mapping)
    angles = 2.0 * np.pi * np.arange(720) / 720
    radii_unit = (np.arange(1, 51)) / 50.0
    rr, tt = np.meshgrid(radii_unit, angles, indexing="ij")
    ux, uy = np.cos(tt).ravel(), np.sin(tt).ravel()
    runit = rr.ravel()

    radius = RADIUS_START
    for _ in range(RADIUS_MAX_STEPS):
        vals = det.evaluate_many(radius * runit * ux, radius * runit * uy)
        if np.all(vals > 0.0):
            return RADIUS_SAFETY * radius
        radius *= RADIUS_FACTOR
    raise NoPositiveRadius(
        "no punctured disk with positive Jacobian found along the schedule"
    )


def inequality_radius(b: float, d: float) -> float:
    """Largest radius keeping 2 + b rho^2 and 3 + d rho^2 strictly positive."""
    bound = math.inf
    if b < 0.0:
        bound = min(bound, math.sqrt(-2.0 / b))
    if d < 0.0:
        bound = min(bound, math.sqrt(-3.0 / d))
    return bound


def disk_probe_points(radius: float, n: int, seed: int = 0) -> np.ndarray:
    """Low-discrepancy interior points: Halton radii/angles, offset by seed."""

    def halton(i: int, base: int) -> float:
        f, r = 1.0, 0.0
        while i > 0:
            f /= base
            r += f * (i % base)
            i //= base
        return r

    pts = np.empty((n, 2))
    for idx in range(n):
        i = idx + 1 + seed
        rr = radius * 0.9 * math.sqrt(halton(i, 2))
        th = 2.0 * math.pi * halton(i, 3)
        pts[idx] = (rr * math.cos(th), rr * math.sin(th))
    return pts


def probe_seed() -> int:
    return int(os.environ.get("INTERPEN_SEED", "0"))


def homeomorphism_certificate(
    bundle: LewyBundle, n_probe: int = DEFAULT_PROBES
) -> dict:
    """Numerical stand-in for the topological global-homeomorphism argument.

    Three checks: the sampled boundary image is simple; the boundary image
    winds exactly once around the images of n_probe interior points; and an
    n_probe-resolution polar grid scan finds no collision pair.  Failures are
    reported, not raised.
    """
    simple = is_simple_closed(bundle.boundary)

    probes = disk_probe_points(bundle.rho, n_probe, probe_seed())
    images = bundle.map.evaluate_many(probes[:, 0], probes[:, 1])
    winding_ok = False
    if simple:
        try:
            winds = winding_numbers(bundle.boundary, images)
            winding_ok = bool(np.all(winds == 1))
        except Exception:
            winding_ok = False

    verdict: InjectivityVerdict = grid_injectivity(
        bundle.map, bundle.disk(), max(n_probe, 16)
    )
    return {
        "boundary_simple": simple,
        "winding_ok": winding_ok,
        "injective": verdict.injective,
        "collision": None if verdict.collision is None else verdict.collision,
    }


def punctured_positivity(
    mapping: PlanarPolyMap, rho: float, n: int = DEFAULT_POSITIVITY_GRID
) -> bool:
    """det Du > 0 at every point of an n*n polar grid of B_rho minus center."""
    det = jacobian_det(mapping)
    radii = rho * np.arange(1, n + 1) / n
    angles = 2.0 * np.pi * np.arange(n) / n
    rr, tt = np.meshgrid(radii, angles, indexing="ij")
    vals = det.evaluate_many(rr.ravel() * np.cos(tt.ravel()), rr.ravel() * np.sin(tt.ravel()))
    return bool(np.all(vals > 0.0))


def compute_certificates(bundle: LewyBundle, n_probe: int = DEFAULT_PROBES) -> LewyCertificates:
    det = jacobian_det(bundle.map)
    center_zero = det.coeff(0, 0) == 0.0
    positive = punctured_positivity(bundle.map, bundle.rho)
    homeo = homeomorphism_certificate(bundle, n_probe)
    _, b, _, d = bundle.q_coeffs
    margins = (2.0 + b * bundle.rho**2, 3.0 + d * bundle.rho**2)
    return LewyCertificates(
        center_jacobian_zero=center_zero,
        punctured_positivity=positive,
        boundary_simple=homeo["boundary_simple"],
        winding_ok=homeo["winding_ok"],
        injective=homeo["injective"],
        inequality_margins=margins,
    )


def build_lewy_counterexample(
    system: EllipticSystem,
    n_samples: int = DEFAULT_SAMPLES,
    n_probe: int = DEFAULT_PROBES,
) -> LewyBundle:
    """Synthesize the cubic solution and certify the degenerate homeomorphism.

    The working radius is rho = 0.9 * min(r, r_ineq) where r comes from the
    positivity-radius search and r_ineq from the two strict inequalities on
    (b, d); the extra 0.9 leaves both inequalities at least a 19% margin.
    """
    sol = synthesize_cubic(system)
    q_coeffs = (sol.a, sol.b, sol.c, sol.d)
    mapping = assemble_lewy_map(sol.theta, q_coeffs)

    r = find_positivity_radius(mapping)
    rho = RADIUS_SAFETY * min(r, inequality_radius(sol.b, sol.d))

    boundary = boundary_polyline(mapping, Disk((0.0, 0.0), rho), n_samples)
    r1, r2 = system_residual(system, mapping)
    resid = max(r1.max_abs_coeff(), r2.max_abs_coeff()) / (
        1.0 + residual_scale(system, mapping)
    )
    bundle = LewyBundle(
        system=system,
        theta=sol.theta,
        q_coeffs=q_coeffs,
        r=r,
        rho=rho,
        map=mapping,
        n_samples=n_samples,
        boundary=boundary,
        certificates=None,
        residual_norm=resid,
    )
    return replace(bundle, certificates=compute_certificates(bundle, n_probe))


def bundle_from_dict(d: dict) -> LewyBundle:
    certs = d["certificates"]
    return LewyBundle(
        system=EllipticSystem.from_dict(d["system"]),
        theta=float(d["theta"]),
        q_coeffs=tuple(float(v) for v in d["q"]),
        r=float(d["r"]),
        rho=float(d["rho"]),
        map=PlanarPolyMap.from_dict(d["map"]),
        n_samples=int(d["n_samples"]),
        boundary=ClosedPolyline(np.array(d["boundary_samples"])),
        certificates=LewyCertificates(
            center_jacobian_zero=certs["center_jacobian_zero"],
            punctured_positivity=certs["punctured_positivity"],
            boundary_simple=certs["boundary_simple"],
            winding_ok=certs["winding_ok"],
            injective=certs["injective"],
            inequality_margins=tuple(certs["inequality_margins"]),
        ),
        residual_norm=float(d["residual_norm"]),
    )


def verify_bundle(bundle: LewyBundle, n_probe: int = DEFAULT_PROBES) -> dict:
    """Recompute invariants and certificates of a stored bundle."""
    report = {"ok": True, "checks": {}}

    def check(name, ok):
        report["checks"][name] = bool(ok)
        if not ok:
            report["ok"] = False

    _, b, _, d = bundle.q_coeffs
    check("rho_below_r", bundle.rho < bundle.r)
    check("inequalities", 2.0 + b * bundle.rho**2 > 0.0 and 3.0 + d * bundle.rho**2 > 0.0)

    expected_map = assemble_lewy_map(bundle.theta, bundle.q_coeffs)
    diff_max = max(
        (bundle.map.u1 - expected_map.u1).max_abs_coeff(),
        (bundle.map.u2 - expected_map.u2).max_abs_coeff(),
    )
    check("map_matches_parameters", diff_max <= 1e-12 * (1.0 + bundle.map.max_abs_coeff()))

    r1, r2 = system_residual(bundle.system, bundle.map)
    scale = residual_scale(bundle.system, bundle.map)
    check("residual_zero", poly_is_zero(r1, scale) and poly_is_zero(r2, scale))

    expected_boundary = boundary_polyline(
        bundle.map, Disk((0.0, 0.0), bundle.rho), bundle.n_samples
    )
    check(
        "boundary_reproducible",
        np.allclose(expected_boundary.vertices, bundle.boundary.vertices, atol=1e-9),
    )

    recomputed = compute_certificates(bundle, n_probe)
    stored = bundle.certificates
    for name in (
        "center_jacobian_zero",
        "punctured_positivity",
        "boundary_simple",
        "winding_ok",
        "injective",
    ):
        check(name, getattr(recomputed, name) == getattr(stored, name))
    check("certificates_pass", recomputed.all_pass())
    return report
