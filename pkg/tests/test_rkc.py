import dataclasses
import json
import math

import numpy as np
import pytest

from interpen.errors import DiagonalizableSystem, KTooSmall
from interpen.geometry import is_convex, is_simple_closed
from interpen.polynomials import BivariatePoly, PlanarPolyMap, jacobian_det
from interpen.rkc import (
    Disk,
    assemble_rkc_map,
    boundary_polyline,
    build_rkc_counterexample,
    bundle_from_dict,
    counterexample_disk,
    default_k,
    fold_certificate,
    nodal_conic,
    nodal_det_closed_form,
    strip_certificate,
    verify_bundle,
)
from interpen.systems import lame, laplacian, perturbed_laplacian

K_LIMIT = 2.0 * (1.0 + math.sqrt(10.0))


@pytest.fixture(scope="module")
def lame_bundle():
    return build_rkc_counterexample(lame(1.0, 1.0), k=K_LIMIT)


class TestBuild:
    def test_lame_at_limiting_k_all_certificates(self, lame_bundle):
        c = lame_bundle.certificates
        assert c.boundary_simple
        assert c.boundary_convex
        assert c.strip.violated and c.strip.boundary_in_strip
        assert c.jacobian_center_zero
        assert c.jacobian_matches_closed_form
        assert c.jacobian_signs.positive > 0 and c.jacobian_signs.negative > 0
        assert c.fold is not None
        assert c.all_pass()
        assert lame_bundle.residual_norm <= 1e-10

    def test_perturbed_system_certificates_hold(self):
        bundle = build_rkc_counterexample(perturbed_laplacian(1.0), n_samples=2048)
        assert bundle.certificates.all_pass()

    def test_diagonalizable_rejected(self):
        with pytest.raises(DiagonalizableSystem):
            build_rkc_counterexample(laplacian())

    def test_k_below_b_rejected(self):
        with pytest.raises(KTooSmall):
            build_rkc_counterexample(lame(1.0, 1.0), k=2.0)
        with pytest.raises(KTooSmall):
            build_rkc_counterexample(lame(1.0, 1.0), k=0.0)

    def test_default_k(self):
        assert default_k(0.0) == 1.0
        assert default_k(-4.0) == pytest.approx(4.004)
        assert default_k(1e-6) == pytest.approx(1e-6 + 1e-3)

    def test_disk_is_the_construction_disk(self, lame_bundle):
        assert lame_bundle.disk.center == (0.5, 0.0)
        assert lame_bundle.disk.radius == pytest.approx(math.sqrt(5.0) / 2.0)

    def test_random_systems_default_path_certifies(self, rng):
        from conftest import random_generic_elliptic

        for _ in range(5):
            system = random_generic_elliptic(rng)
            bundle = build_rkc_counterexample(
                system, n_samples=1024, sign_grid_n=48, fold_grid_n=48
            )
            assert bundle.certificates.all_pass(), bundle.k
            assert bundle.residual_norm <= 1e-10
            # the closed-form Jacobian identity holds across the family
            det = jacobian_det(bundle.map)
            closed = nodal_det_closed_form(bundle.p_coeffs, bundle.k)
            assert (det - closed).max_abs_coeff() <= 1e-12 * (
                1.0 + closed.max_abs_coeff()
            )
            assert bundle.certificates.strip.w1 == -1.0

    def test_boundary_identity_x_equals_radial(self, lame_bundle):
        # on the boundary circle, x = x^2 + y^2 - 1 holds
        n = 512
        t = 2.0 * np.pi * np.arange(n) / n
        disk = lame_bundle.disk
        xs = disk.center[0] + disk.radius * np.cos(t)
        ys = disk.center[1] + disk.radius * np.sin(t)
        assert np.max(np.abs(xs - (xs**2 + ys**2 - 1.0))) <= 1e-12


class TestStripCertificate:
    def test_center_escapes_exactly(self, lame_bundle):
        strip = lame_bundle.certificates.strip
        assert strip.w1 == -1.0
        assert strip.bound == pytest.approx((1.0 - math.sqrt(5.0)) / 2.0)
        assert strip.violated

    def test_boundary_stays_inside(self, lame_bundle):
        assert lame_bundle.certificates.strip.boundary_in_strip

    def test_translated_map_negative_control(self, lame_bundle):
        shifted = PlanarPolyMap(
            lame_bundle.map.u1 + BivariatePoly.constant(1.5),
            lame_bundle.map.u2,
        )
        control = dataclasses.replace(lame_bundle, map=shifted)
        assert not strip_certificate(control).violated


class TestJacobian:
    def test_closed_form_identity(self, lame_bundle):
        det = jacobian_det(lame_bundle.map)
        closed = nodal_det_closed_form(lame_bundle.p_coeffs, lame_bundle.k)
        diff = det - closed
        assert diff.max_abs_coeff() <= 1e-12 * (1.0 + closed.max_abs_coeff())

    def test_constant_term_exactly_zero(self, lame_bundle):
        assert jacobian_det(lame_bundle.map).coeff(0, 0) == 0.0

    def test_sign_triple_at_default_k(self):
        # strict default k makes the pattern strict even when b = -k would
        # make it degenerate at the limiting value
        bundle = build_rkc_counterexample(
            lame(1.0, 1.0), n_samples=512, sign_grid_n=32, fold_grid_n=32
        )
        a, b, c = bundle.p_coeffs
        conic = nodal_conic(bundle.p_coeffs, bundle.k)
        assert conic.value(1.0, 0.0) > 0.0
        assert conic.value(0.0, 0.0) == 0.0
        assert conic.value(-1.0, 0.0) < 0.0


class TestNodalConic:
    def test_degenerate_line(self):
        conic = nodal_conic((0.0, 0.0, 0.0), 1.0)
        assert conic.kind == "line"
        branch = conic.branch_through_origin(counterexample_disk())
        assert np.max(np.abs(branch[:, 0])) == 0.0

    def test_pure_hyperbola(self):
        conic = nodal_conic((0.0, 1.0, 0.0), 2.0)
        assert conic.kind == "hyperbola"
        # conic discriminant of b x^2 + (c-a) xy - b y^2 is positive
        a, b, c = 0.0, 1.0, 0.0
        assert (c - a) ** 2 + 4.0 * b * b > 0.0

    def test_lame_branch_inside_disk_satisfies_equation(self, lame_bundle):
        conic = nodal_conic(lame_bundle.p_coeffs, lame_bundle.k)
        assert conic.kind == "hyperbola"
        branch = conic.branch_through_origin(lame_bundle.disk)
        assert branch.shape[0] > 10
        vals = [conic.value(x, y) for x, y in branch]
        assert max(abs(v) for v in vals) <= 1e-9 * (1.0 + lame_bundle.k)
        dists = np.hypot(branch[:, 0] - 0.5, branch[:, 1])
        assert np.all(dists <= lame_bundle.disk.radius + 1e-12)
        # passes through the origin
        assert np.min(np.hypot(branch[:, 0], branch[:, 1])) <= 0.05


class TestFold:
    def test_lame_fold_found(self, lame_bundle):
        fold = lame_bundle.certificates.fold
        assert fold is not None
        assert fold.image_distance <= 1e-6 * 25.0  # image diameter is ~20
        assert fold.domain_distance > lame_bundle.disk.radius / 10.0
        # both points inside the closed disk
        for pt in (fold.p, fold.q):
            assert lame_bundle.disk.contains(pt[0], pt[1], slack=1e-9)

    def test_identity_map_no_fold(self, lame_bundle):
        control = dataclasses.replace(lame_bundle, map=PlanarPolyMap.identity())
        assert fold_certificate(control, 48) is None

    def test_subdisk_on_one_side_of_nodal_line_no_fold(self, lame_bundle):
        # the nodal branch lies in x <= 0; this sub-disk sits in x >= 0.5
        sub = dataclasses.replace(lame_bundle, disk=Disk((0.8, 0.0), 0.3))
        det = jacobian_det(lame_bundle.map)
        # confirm single-signedness on the sub-disk first
        t = np.linspace(0, 2 * np.pi, 200)
        for r in (0.1, 0.2, 0.3):
            vals = det.evaluate_many(0.8 + r * np.cos(t), r * np.sin(t))
            assert np.all(vals > 0)
        assert fold_certificate(sub, 48) is None


class TestBoundaryCurveThresholds:
    """The boundary image degenerates as k drops: convexity fails first,
    then simplicity; at half the family coefficient it is badly folded."""

    @staticmethod
    def curve(k):
        mapping = assemble_rkc_map(0.0, (0.0, -4.0, 0.0), k)
        return boundary_polyline(mapping, counterexample_disk(), 4096)

    def test_convex_above_limiting_value(self):
        poly = self.curve(8.5)
        assert is_simple_closed(poly) and is_convex(poly)

    def test_simple_but_nonconvex_between_thresholds(self):
        poly = self.curve(7.0)
        assert is_simple_closed(poly)
        assert not is_convex(poly)

    def test_half_b_badly_folded(self):
        assert not is_simple_closed(self.curve(2.0))


class TestSerializationAndVerify:
    def test_round_trip_verifies(self, lame_bundle):
        data = json.loads(json.dumps(lame_bundle.to_dict()))
        again = bundle_from_dict(data)
        report = verify_bundle(again, sign_grid_n=64)
        assert report["ok"], report

    def test_tampered_k_fails(self, lame_bundle):
        data = lame_bundle.to_dict()
        data["k"] = 2.0
        report = verify_bundle(bundle_from_dict(data), sign_grid_n=64)
        assert not report["ok"]
        assert not report["checks"]["k_admissible"]

    def test_tampered_certificate_fails(self, lame_bundle):
        data = lame_bundle.to_dict()
        data["certificates"]["boundary_convex"] = False
        report = verify_bundle(bundle_from_dict(data), sign_grid_n=64)
        assert not report["ok"]
        assert not report["checks"]["boundary_convex"]
