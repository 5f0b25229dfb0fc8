import math

import numpy as np
import pytest

from interpen.errors import DegenerateInput, TooCloseToBoundary
from interpen.harmonic import (
    BoundaryMap,
    poisson_extend,
    poisson_extend_many,
    rkc_demo,
)

QUAD = np.array([[1.5, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])


@pytest.fixture(scope="module")
def quad_boundary():
    return BoundaryMap.from_polygon(QUAD)


class TestPoissonExtend:
    def test_constant_boundary_reproduced(self):
        boundary = BoundaryMap(lambda t: (2.5, -1.0))
        val = poisson_extend(boundary, (0.3, 0.4), 1024)
        assert val[0] == pytest.approx(2.5, abs=1e-10)
        assert val[1] == pytest.approx(-1.0, abs=1e-10)

    def test_identity_boundary_is_identity(self):
        boundary = BoundaryMap.identity_circle()
        for pt in [(0.0, 0.0), (0.5, 0.3), (-0.9, 0.0), (0.4, -0.7)]:
            val = poisson_extend(boundary, pt, 4096)
            assert val[0] == pytest.approx(pt[0], abs=1e-6)
            assert val[1] == pytest.approx(pt[1], abs=1e-6)

    def test_mean_value_property(self, quad_boundary):
        val = poisson_extend(quad_boundary, (0.0, 0.0), 4096)
        mean = quad_boundary.table(4096).mean(axis=0)
        assert abs(val[0] - mean[0]) <= 1e-8
        assert abs(val[1] - mean[1]) <= 1e-8

    def test_harmonic_polynomial_reproduced(self):
        boundary = BoundaryMap(lambda t: (math.cos(2 * t), math.sin(2 * t)))
        for pt in [(0.5, 0.2), (-0.3, 0.6), (0.9, 0.0), (0.0, -0.85)]:
            val = poisson_extend(boundary, pt, 4096)
            x, y = pt
            assert val[0] == pytest.approx(x * x - y * y, abs=1e-6)
            assert val[1] == pytest.approx(2 * x * y, abs=1e-6)

    def test_too_close_to_boundary(self, quad_boundary):
        with pytest.raises(TooCloseToBoundary):
            poisson_extend(quad_boundary, (0.9999, 0.0), 1024)

    def test_quadrature_floor(self, quad_boundary):
        with pytest.raises(ValueError):
            poisson_extend(quad_boundary, (0.0, 0.0), 64)

    def test_values_inside_convex_target(self, quad_boundary, rng):
        pts = rng.uniform(-0.6, 0.6, size=(64, 2))
        vals = poisson_extend_many(quad_boundary, pts, 2048)
        # supporting half-planes of the quadrilateral
        e = np.roll(QUAD, -1, axis=0) - QUAD
        nrm = np.stack([-e[:, 1], e[:, 0]], axis=1)
        offs = (QUAD * nrm).sum(axis=1)
        assert np.all(vals @ nrm.T >= offs[None, :] - 1e-9)


class TestBoundaryMap:
    def test_polygon_traversal_is_arclength_proportional(self):
        square = BoundaryMap.from_polygon(
            np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
        )
        assert square.sampler(0.0) == (0.0, 0.0)
        # quarter of the perimeter = one full side
        assert square.sampler(math.pi / 2.0) == (1.0, 0.0)

    def test_table_cached(self, quad_boundary):
        t1 = quad_boundary.table(256)
        t2 = quad_boundary.table(256)
        assert t1 is t2

    def test_degenerate_polygon_rejected(self):
        with pytest.raises(DegenerateInput):
            BoundaryMap.from_polygon(np.array([[0.0, 0.0], [1.0, 0.0]]))


class TestRkcDemo:
    def test_identity_boundary_injective(self):
        result = rkc_demo(BoundaryMap.identity_circle(), grid_n=64, n_quad=512)
        assert result["injective"] and result["inside_hull"]

    def test_quadrilateral_injective(self, quad_boundary):
        result = rkc_demo(quad_boundary, grid_n=64, n_quad=512)
        assert result["injective"] and result["inside_hull"]

    def test_nonconvex_target_rejected(self):
        t_star = BoundaryMap(
            lambda t: (
                (1.0 + 0.6 * math.cos(5 * t)) * math.cos(t),
                (1.0 + 0.6 * math.cos(5 * t)) * math.sin(t),
            )
        )
        with pytest.raises(DegenerateInput):
            rkc_demo(t_star, grid_n=32, n_quad=512)
