"""Deterministic SVG emission of the counterexample figures.

Figure 1: the domain circle and its convex boundary image.  Figure 2:
concentric circles in the domain with the Jacobian nodal line, and their
images, which fold exactly where a circle crosses the nodal line.  Output is
a pure function of the bundle and flags — coordinates are formatted with a
fixed number of decimals so repeated renders are byte-identical and the
committed snapshots can be diffed.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ParameterOutOfRange
from .rkc import RkcBundle, nodal_conic

WIDTH, HEIGHT = 900, 460
PANEL_W, PANEL_H = 400, 380
MARGIN_X, GAP = 40, 40
MARGIN_Y = 40

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def _fmt(v: float) -> str:
    out = f"{v:.9f}"
    return "0.000000000" if out == "-0.000000000" else out


class _Panel:
    """Affine data-to-pixel transform for one panel box.

    x and y are scaled independently to fill the box unless `uniform` asks
    for a single isotropic scale (used for the domain panels so circles stay
    circular).
    """

    def __init__(self, x0, y0, data_bbox, uniform=False, pad=0.05):
        xmin, ymin, xmax, ymax = data_bbox
        dx = max(xmax - xmin, 1e-12)
        dy = max(ymax - ymin, 1e-12)
        xmin -= pad * dx
        xmax += pad * dx
        ymin -= pad * dy
        ymax += pad * dy
        dx = xmax - xmin
        dy = ymax - ymin
        sx = PANEL_W / dx
        sy = PANEL_H / dy
        if uniform:
            sx = sy = min(sx, sy)
        self.sx, self.sy = sx, sy
        self.cx = x0 + 0.5 * PANEL_W - sx * 0.5 * (xmin + xmax)
        self.cy = y0 + 0.5 * PANEL_H + sy * 0.5 * (ymin + ymax)
        self.box = (x0, y0)

    def pt(self, x, y):
        return self.cx + self.sx * x, self.cy - self.sy * y

    def path(self, xs, ys, closed=True):
        pieces = []
        for i, (x, y) in enumerate(zip(xs, ys)):
            px, py = self.pt(x, y)
            pieces.append(f"{'M' if i == 0 else 'L'} {_fmt(px)} {_fmt(py)}")
        if closed:
            pieces.append("Z")
        return " ".join(pieces)

    def frame(self):
        x0, y0 = self.box
        return (
            f'<rect x="{x0}" y="{y0}" width="{PANEL_W}" height="{PANEL_H}" '
            f'fill="none" stroke="#888888" stroke-width="1"/>'
        )


def _bbox(xs, ys):
    return (float(np.min(xs)), float(np.min(ys)), float(np.max(xs)), float(np.max(ys)))


def _circle_points(center, radius, n=1024):
    t = 2.0 * np.pi * np.arange(n) / n
    return center[0] + radius * np.cos(t), center[1] + radius * np.sin(t)


def _document(elements) -> str:
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">\n'
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>\n'
    )
    return head + "\n".join(elements) + "\n</svg>\n"


def render_figure1(bundle: RkcBundle, out) -> str:
    """Domain circle (left) and its boundary image (right, axes scaled
    independently).  Returns the path written."""
    disk = bundle.disk
    cx0, cy0 = MARGIN_X, MARGIN_Y
    cx1 = MARGIN_X + PANEL_W + GAP

    dom_x, dom_y = _circle_points(disk.center, disk.radius)
    left = _Panel(cx0, cy0, _bbox(dom_x, dom_y), uniform=True)

    img = bundle.boundary.vertices
    right = _Panel(cx1, cy0, _bbox(img[:, 0], img[:, 1]), uniform=False)

    elements = [
        left.frame(),
        f'<path d="{left.path(dom_x, dom_y)}" fill="none" stroke="{PALETTE[0]}" stroke-width="1.5"/>',
        right.frame(),
        f'<path d="{right.path(img[:, 0], img[:, 1])}" fill="none" stroke="{PALETTE[1]}" stroke-width="1.5"/>',
    ]
    doc = _document(elements)
    with open(out, "wb") as fh:
        fh.write(doc.encode("utf-8"))
    return str(out)


def default_figure2_radii(bundle: RkcBundle) -> list:
    """Six geometrically spaced radii inside the disk (ratio 0.7)."""
    top = 0.98 * bundle.disk.radius
    return [top * 0.7 ** (5 - i) for i in range(6)]


def render_figure2(bundle: RkcBundle, radii, out, n_circle: int = 1024) -> str:
    """Concentric domain circles with the Jacobian nodal line (left) and
    their images (right)."""
    disk = bundle.disk
    for r in radii:
        if not (0.0 < r <= disk.radius):
            raise ParameterOutOfRange(f"circle radius {r} not inside the disk")

    cx0, cy0 = MARGIN_X, MARGIN_Y
    cx1 = MARGIN_X + PANEL_W + GAP

    dom_x, dom_y = _circle_points(disk.center, disk.radius)
    left = _Panel(cx0, cy0, _bbox(dom_x, dom_y), uniform=True)

    circles = [_circle_points(disk.center, r, n_circle) for r in radii]
    image_curves = [
        bundle.map.evaluate_many(xs, ys) for xs, ys in circles
    ]
    all_img = np.vstack(image_curves)
    right = _Panel(cx1, cy0, _bbox(all_img[:, 0], all_img[:, 1]), uniform=False)

    elements = [
        left.frame(),
        f'<path d="{left.path(dom_x, dom_y)}" fill="none" stroke="#888888" '
        f'stroke-width="1" stroke-dasharray="4 3"/>',
    ]
    for idx, (xs, ys) in enumerate(circles):
        color = PALETTE[idx % len(PALETTE)]
        elements.append(
            f'<path d="{left.path(xs, ys)}" fill="none" stroke="{color}" stroke-width="1.2"/>'
        )
    branch = nodal_conic(bundle.p_coeffs, bundle.k).branch_through_origin(disk)
    if branch.shape[0] >= 2:
        elements.append(
            f'<path d="{left.path(branch[:, 0], branch[:, 1], closed=False)}" '
            f'fill="none" stroke="#000000" stroke-width="1.8"/>'
        )

    elements.append(right.frame())
    for idx, curve in enumerate(image_curves):
        color = PALETTE[idx % len(PALETTE)]
        elements.append(
            f'<path d="{right.path(curve[:, 0], curve[:, 1])}" fill="none" '
            f'stroke="{color}" stroke-width="1.2"/>'
        )

    doc = _document(elements)
    with open(out, "wb") as fh:
        fh.write(doc.encode("utf-8"))
    return str(out)
