import math

import numpy as np
import pytest
import sympy

from interpen.errors import DegreeTooHigh
from interpen.polynomials import (
    BivariatePoly,
    PlanarPolyMap,
    hessian,
    jacobian_det,
    poly_is_zero,
    rotate_map,
    system_residual,
)
from interpen.systems import SymMat2, lame, laplacian

from conftest import random_generic_elliptic

X, Y = sympy.symbols("x y")


def to_sympy(poly: BivariatePoly):
    return sympy.expand(
        sum(c * X**i * Y**j for (i, j), c in poly.coeffs.items())
    )


def from_sympy(expr) -> BivariatePoly:
    expr = sympy.expand(expr)
    coeffs = {}
    for term, coef in expr.as_poly(X, Y).terms():
        coeffs[(term[0], term[1])] = float(coef)
    return BivariatePoly(coeffs)


def random_cubic(rng) -> BivariatePoly:
    coeffs = {}
    for i in range(4):
        for j in range(4 - i):
            coeffs[(i, j)] = rng.uniform(-2.0, 2.0)
    return BivariatePoly(coeffs)


class TestEvaluate:
    def test_identity_map(self):
        assert PlanarPolyMap.identity().evaluate(3.0, 4.0) == (3.0, 4.0)

    def test_shifted_paraboloid(self):
        m = PlanarPolyMap(
            BivariatePoly({(2, 0): 1.0, (0, 2): 1.0, (0, 0): -1.0}),
            BivariatePoly.y(),
        )
        assert m.evaluate(0.0, 0.0) == (-1.0, 0.0)

    def test_cubic_radial(self):
        m = PlanarPolyMap(
            BivariatePoly({(3, 0): 1.0, (1, 2): 1.0}), BivariatePoly.y()
        )
        assert m.evaluate(1.0, 1.0) == (2.0, 1.0)

    def test_evaluate_many_matches_scalar(self, rng):
        poly = random_cubic(rng)
        xs = rng.uniform(-2, 2, size=40)
        ys = rng.uniform(-2, 2, size=40)
        many = poly.evaluate_many(xs, ys)
        for k in range(40):
            assert many[k] == pytest.approx(poly.evaluate(xs[k], ys[k]), rel=1e-13)

    def test_serialization_round_trip(self, rng):
        poly = random_cubic(rng)
        assert BivariatePoly.from_triples(poly.to_triples()) == poly


class TestHessian:
    def test_radial_quadratic(self):
        h = hessian(BivariatePoly({(2, 0): 1.0, (0, 2): 1.0}))
        assert h[0][0] == BivariatePoly.constant(2.0)
        assert h[1][1] == BivariatePoly.constant(2.0)
        assert h[0][1] == BivariatePoly.zero()

    def test_cubic_radial_against_symbolic(self):
        poly = BivariatePoly({(3, 0): 1.0, (1, 2): 1.0})  # x (x^2 + y^2)
        h = hessian(poly)
        expr = X * (X**2 + Y**2)
        assert h[0][0] == from_sympy(sympy.diff(expr, X, X))
        assert h[0][1] == from_sympy(sympy.diff(expr, X, Y))
        assert h[1][1] == from_sympy(sympy.diff(expr, Y, Y))
        # the printed form: [[6x, 2y], [2y, 2x]]
        assert h[0][0] == BivariatePoly({(1, 0): 6.0})
        assert h[0][1] == BivariatePoly({(0, 1): 2.0})
        assert h[1][1] == BivariatePoly({(1, 0): 2.0})

    def test_linear_is_zero(self):
        h = hessian(BivariatePoly({(1, 0): 3.0, (0, 1): -2.0, (0, 0): 5.0}))
        assert all(h[i][j] == BivariatePoly.zero() for i in range(2) for j in range(2))

    def test_degree_cap(self):
        with pytest.raises(DegreeTooHigh):
            hessian(BivariatePoly({(4, 0): 1.0}))

    def test_matches_finite_differences(self, rng):
        poly = random_cubic(rng)
        h = hessian(poly)
        step = 1e-4
        pts = rng.uniform(-1.5, 1.5, size=(100, 2))
        for x, y in pts:
            fxx = (poly.evaluate(x + step, y) - 2 * poly.evaluate(x, y) + poly.evaluate(x - step, y)) / step**2
            fyy = (poly.evaluate(x, y + step) - 2 * poly.evaluate(x, y) + poly.evaluate(x, y - step)) / step**2
            fxy = (
                poly.evaluate(x + step, y + step)
                - poly.evaluate(x + step, y - step)
                - poly.evaluate(x - step, y + step)
                + poly.evaluate(x - step, y - step)
            ) / (4 * step**2)
            ref = 1.0 + max(abs(fxx), abs(fxy), abs(fyy))
            assert abs(h[0][0].evaluate(x, y) - fxx) <= 1e-6 * ref
            assert abs(h[0][1].evaluate(x, y) - fxy) <= 1e-6 * ref
            assert abs(h[1][1].evaluate(x, y) - fyy) <= 1e-6 * ref


class TestSystemResidual:
    def test_harmonic_pair_under_laplacian(self):
        m = PlanarPolyMap(
            BivariatePoly({(2, 0): 1.0, (0, 2): -1.0}),
            BivariatePoly({(1, 1): 2.0}),
        )
        r1, r2 = system_residual(laplacian(), m)
        assert r1 == BivariatePoly.zero()
        assert r2 == BivariatePoly.zero()

    def test_affine_maps_solve_everything(self, rng):
        system = random_generic_elliptic(rng)
        m = PlanarPolyMap(
            BivariatePoly({(1, 0): 2.0, (0, 1): -1.0, (0, 0): 3.0}),
            BivariatePoly({(1, 0): 0.5, (0, 1): 4.0}),
        )
        r1, r2 = system_residual(system, m)
        assert r1 == BivariatePoly.zero()
        assert r2 == BivariatePoly.zero()

    def test_linearity_in_the_map(self, rng):
        system = random_generic_elliptic(rng)
        m1 = PlanarPolyMap(random_cubic(rng), random_cubic(rng))
        m2 = PlanarPolyMap(random_cubic(rng), random_cubic(rng))
        al, be = 1.7, -0.6
        combo = PlanarPolyMap(
            m1.u1.scaled(al) + m2.u1.scaled(be),
            m1.u2.scaled(al) + m2.u2.scaled(be),
        )
        ra = system_residual(system, combo)
        rb = system_residual(system, m1)
        rc = system_residual(system, m2)
        for k in range(2):
            diff = ra[k] - (rb[k].scaled(al) + rc[k].scaled(be))
            assert diff.max_abs_coeff() <= 1e-13 * (1.0 + ra[k].max_abs_coeff())

    def test_degree_cap(self):
        quartic = PlanarPolyMap(BivariatePoly({(4, 0): 1.0}), BivariatePoly.y())
        with pytest.raises(DegreeTooHigh):
            system_residual(laplacian(), quartic)


class TestJacobianDet:
    def test_identity(self):
        assert jacobian_det(PlanarPolyMap.identity()) == BivariatePoly.constant(1.0)

    def test_matches_symbolic_oracle(self, rng):
        for _ in range(10):
            m = PlanarPolyMap(random_cubic(rng), random_cubic(rng))
            u1, u2 = to_sympy(m.u1), to_sympy(m.u2)
            expr = sympy.diff(u1, X) * sympy.diff(u2, Y) - sympy.diff(u1, Y) * sympy.diff(u2, X)
            expected = from_sympy(expr)
            diff = jacobian_det(m) - expected
            assert diff.max_abs_coeff() <= 1e-12 * (1.0 + expected.max_abs_coeff())

    def test_rotation_invariance(self, rng):
        m = PlanarPolyMap(random_cubic(rng), random_cubic(rng))
        det0 = jacobian_det(m)
        det1 = jacobian_det(rotate_map(m, 0.7))
        diff = det0 - det1
        assert diff.max_abs_coeff() <= 1e-12 * (1.0 + det0.max_abs_coeff())

    def test_cubic_map_degenerates_at_origin(self):
        m = PlanarPolyMap(
            BivariatePoly({(3, 0): 1.0, (1, 2): 1.0}),
            BivariatePoly({(0, 1): 1.0, (2, 1): 1.0}),
        )
        det = jacobian_det(m)
        assert det.coeff(0, 0) == 0.0
        assert det.evaluate(0.0, 0.0) == 0.0


class TestZeroTest:
    def test_scales_with_reference(self):
        tiny = BivariatePoly({(1, 0): 1e-12})
        assert poly_is_zero(tiny, 10.0)
        assert not poly_is_zero(BivariatePoly({(1, 0): 1e-3}), 10.0)
