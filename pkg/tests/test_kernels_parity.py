"""Backend parity: the compiled core and the numpy fallback must agree.

Booleans must match exactly; floating results to tight tolerances (the term
order is pinned in both implementations, so poly evaluation agrees bitwise
with FMA contraction disabled).
"""

import math

import numpy as np
import pytest

import interpen.geometry as geometry
from interpen._kernels import _fallback, available_backends

_core = pytest.importorskip(
    "interpen._kernels._core", reason="compiled backend not built"
)

BACKENDS = [_fallback, _core]


@pytest.fixture
def curve():
    t = 2.0 * np.pi * np.arange(512) / 512
    return np.stack(
        [np.cos(t) + 0.2 * np.cos(3 * t), np.sin(t) + 0.15 * np.sin(5 * t)], axis=1
    )


def test_both_backends_available():
    assert set(available_backends()) == {"python", "compiled"}


def test_poly_eval_grid_bitwise(rng):
    powers = np.array([(i, j) for i in range(4) for j in range(4 - i)], dtype=np.int64)
    coeffs = rng.uniform(-2, 2, size=powers.shape[0])
    xs = rng.uniform(-3, 3, size=1000)
    ys = rng.uniform(-3, 3, size=1000)
    ra = _fallback.poly_eval_grid(powers, coeffs, xs, ys)
    rb = _core.poly_eval_grid(powers, coeffs, xs, ys)
    assert np.array_equal(ra, rb)


def test_orientation_filter_identical(rng, curve):
    n = curve.shape[0]
    idx_i = rng.integers(0, n, size=400).astype(np.int64)
    idx_j = (idx_i + rng.integers(2, n - 2, size=400)) % n
    keep = idx_i < idx_j
    idx_i, idx_j = idx_i[keep], idx_j[keep]
    sa = _fallback.orientation_filter_pairs(curve, idx_i, idx_j)
    sb = _core.orientation_filter_pairs(curve, idx_i, idx_j)
    assert np.array_equal(sa, sb)


def test_candidate_pairs_cover_all_intersections(curve):
    # candidate supersets may differ; the derived verdicts must not
    for impl in BACKENDS:
        i, j = impl.segment_candidate_pairs(curve)
        assert i.shape == j.shape
        gap = j - i
        assert np.all((gap > 1) & (gap < curve.shape[0] - 1))


def test_simplicity_verdicts_match(rng, monkeypatch):
    polylines = []
    for trial in range(30):
        n = int(rng.integers(8, 64))
        if trial % 2 == 0:
            angles = np.sort(rng.uniform(0, 2 * np.pi, size=n))
            if np.min(np.diff(angles)) < 1e-3:
                continue
            radii = rng.uniform(0.3, 1.5, size=n)
            pts = np.stack([radii * np.cos(angles), radii * np.sin(angles)], axis=1)
        else:
            pts = rng.uniform(-1, 1, size=(n, 2))
        try:
            polylines.append(geometry.ClosedPolyline(pts))
        except Exception:
            continue
    results = []
    for impl in BACKENDS:
        monkeypatch.setattr(geometry, "_impl", impl)
        results.append([geometry.is_simple_closed(p) for p in polylines])
    assert results[0] == results[1]


def test_winding_parity(rng, curve):
    pts = rng.uniform(-0.4, 0.4, size=(50, 2))
    aa, da = _fallback.winding_accumulate(curve, pts)
    ab, db = _core.winding_accumulate(curve, pts)
    assert np.allclose(aa, ab, atol=1e-11)
    assert np.allclose(da, db, atol=1e-13)


def test_poisson_parity(rng):
    n = 1024
    t = 2.0 * np.pi * np.arange(n) / n
    unit = np.stack([np.cos(t), np.sin(t)], axis=1)
    samples = np.stack([np.cos(2 * t), np.sin(2 * t)], axis=1)
    pts = 0.8 * (rng.uniform(-1, 1, size=(200, 2)))
    pts = pts[np.hypot(pts[:, 0], pts[:, 1]) < 0.9]
    ra = _fallback.poisson_apply(samples, unit, pts)
    rb = _core.poisson_apply(samples, unit, pts)
    assert np.allclose(ra, rb, rtol=1e-12, atol=1e-14)


def test_certificates_identical_across_backends(monkeypatch):
    from interpen.rkc import assemble_rkc_map, boundary_polyline, counterexample_disk

    mapping = assemble_rkc_map(0.0, (0.0, -4.0, 0.0), 2.0 * (1.0 + math.sqrt(10.0)))
    poly = boundary_polyline(mapping, counterexample_disk(), 1024)
    outcomes = []
    for impl in BACKENDS:
        monkeypatch.setattr(geometry, "_impl", impl)
        outcomes.append(
            (geometry.is_simple_closed(poly), geometry.is_convex(poly))
        )
    assert outcomes[0] == outcomes[1] == (True, True)
