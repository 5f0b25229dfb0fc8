import json
import math
import pathlib
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from interpen.errors import ParameterOutOfRange
from interpen.geometry import ClosedPolyline, is_simple_closed
from interpen.render import default_figure2_radii, render_figure1, render_figure2
from interpen.rkc import build_rkc_counterexample, bundle_from_dict
from interpen.systems import lame

GOLDEN = pathlib.Path(__file__).parent / "golden"
K_LIMIT = 2.0 * (1.0 + math.sqrt(10.0))


@pytest.fixture(scope="module")
def bundle():
    return build_rkc_counterexample(lame(1.0, 1.0), k=K_LIMIT)


@pytest.fixture(scope="module")
def golden_bundle():
    with open(GOLDEN / "rkc_lame11.json") as fh:
        return bundle_from_dict(json.load(fh))


class TestGoldenRegression:
    def test_pipeline_reproduces_golden_bundle(self, bundle):
        with open(GOLDEN / "rkc_lame11.json") as fh:
            stored = json.load(fh)
        fresh = bundle.to_dict()
        assert fresh["theta"] == stored["theta"]
        assert fresh["p"] == stored["p"]
        assert fresh["k"] == stored["k"]
        assert fresh["boundary_samples"] == stored["boundary_samples"]
        assert fresh["certificates"]["all_pass"] and stored["certificates"]["all_pass"]

    def test_figure1_bytes(self, golden_bundle, tmp_path):
        out = tmp_path / "fig1.svg"
        render_figure1(golden_bundle, out)
        assert out.read_bytes() == (GOLDEN / "figure1.svg").read_bytes()

    def test_figure2_bytes(self, golden_bundle, tmp_path):
        out = tmp_path / "fig2.svg"
        render_figure2(golden_bundle, default_figure2_radii(golden_bundle), out)
        assert out.read_bytes() == (GOLDEN / "figure2.svg").read_bytes()

    def test_render_twice_identical(self, bundle, tmp_path):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        render_figure1(bundle, a)
        render_figure1(bundle, b)
        assert a.read_bytes() == b.read_bytes()


class TestSvgValidity:
    def test_figures_parse_as_xml(self, bundle, tmp_path):
        f1, f2 = tmp_path / "f1.svg", tmp_path / "f2.svg"
        render_figure1(bundle, f1)
        render_figure2(bundle, default_figure2_radii(bundle), f2)
        for path in (f1, f2):
            root = ET.parse(path).getroot()
            assert root.tag.endswith("svg")

    def test_coarse_bundle_renders(self, tmp_path):
        coarse = build_rkc_counterexample(
            lame(1.0, 1.0), k=K_LIMIT, n_samples=64, sign_grid_n=32, fold_grid_n=32
        )
        out = tmp_path / "coarse.svg"
        render_figure1(coarse, out)
        assert ET.parse(out).getroot().tag.endswith("svg")

    def test_radius_outside_disk_rejected(self, bundle, tmp_path):
        with pytest.raises(ParameterOutOfRange):
            render_figure2(bundle, [2.0], tmp_path / "bad.svg")


class TestFigure2Geometry:
    """Circle images pinch where the circles cross the nodal hyperbola.

    The collision locus of the map is the branch with vertex (k/|b|, 0)
    (distance k/|b| - 1/2 from the disk center), which lies inside the disk
    for k near |b|; at such k, circle images fold exactly beyond that radius
    while small circles keep simple images.
    """

    @staticmethod
    def circle_image(k, radius, n=1024):
        from interpen.rkc import assemble_rkc_map, counterexample_disk

        mapping = assemble_rkc_map(0.0, (0.0, -4.0, 0.0), k)
        disk = counterexample_disk()
        t = 2.0 * np.pi * np.arange(n) / n
        xs = disk.center[0] + radius * np.cos(t)
        ys = disk.center[1] + radius * np.sin(t)
        return ClosedPolyline(mapping.evaluate_many(xs, ys))

    def test_small_circle_image_simple(self):
        assert is_simple_closed(self.circle_image(4.004, 0.3))

    def test_crossing_circle_image_self_intersects(self):
        assert not is_simple_closed(self.circle_image(4.004, 0.8))

    def test_default_radii_cover_both_regimes(self, bundle):
        radii = default_figure2_radii(bundle)
        assert len(radii) == 6
        assert all(0.0 < r < bundle.disk.radius for r in radii)
        assert min(radii) < 0.5 < max(radii)
