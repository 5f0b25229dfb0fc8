"""Certified discrete-geometry predicates for the counterexample certificates.

Simplicity and convexity of sampled curves, winding numbers, grid injectivity
scans and Jacobian sign fields.  Orientation decisions use a floating-point
filter with an exact rational fallback, so boolean certificates cannot flip
on rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from .errors import DegenerateInput, InterpenError, PointOnCurve
from ._kernels import impl as _impl

#: Consecutive-edge cross products within this times the edge scale count as flat.
CONVEXITY_FLAT_RTOL = 1e-12


@dataclass(frozen=True)
class ClosedPolyline:
    """Closed polyline; the last vertex connects back to the first.

    Vertices do not repeat the starting point.  At least 8 vertices and no
    repeated consecutive vertices (checked, since zero-length edges poison
    the predicates).
    """

    vertices: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise DegenerateInput(f"expected (n, 2) vertex array, got {v.shape}")
        if v.shape[0] < 8:
            raise DegenerateInput(f"need >= 8 vertices, got {v.shape[0]}")
        if not np.all(np.isfinite(v)):
            raise DegenerateInput("non-finite vertices")
        if np.any(np.all(v == np.roll(v, -1, axis=0), axis=1)):
            raise DegenerateInput("repeated consecutive vertices")
        object.__setattr__(self, "vertices", v)

    def __len__(self) -> int:
        return self.vertices.shape[0]

    def edges(self) -> np.ndarray:
        return np.roll(self.vertices, -1, axis=0) - self.vertices

    def scale(self) -> float:
        v = self.vertices
        return float((v.max(axis=0) - v.min(axis=0)).max())

    def to_csv(self, path):
        """One "x,y" row per vertex, no header."""
        np.savetxt(path, self.vertices, fmt="%.17g", delimiter=",")

    @staticmethod
    def from_csv(path) -> "ClosedPolyline":
        return ClosedPolyline(np.loadtxt(path, delimiter=",", ndmin=2))


def _orient_exact(a, b, c) -> int:
    """Exact orientation sign via rational arithmetic (floats are exact)."""
    det = (Fraction(b[0]) - Fraction(a[0])) * (Fraction(c[1]) - Fraction(a[1])) - (
        Fraction(b[1]) - Fraction(a[1])
    ) * (Fraction(c[0]) - Fraction(a[0]))
    return (det > 0) - (det < 0)


def _segments_intersect_exact(a, b, c, d) -> bool:
    """Exact test: do segments ab and cd share any point (touching counts)?"""
    d1 = _orient_exact(c, d, a)
    d2 = _orient_exact(c, d, b)
    d3 = _orient_exact(a, b, c)
    d4 = _orient_exact(a, b, d)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True

    def on_segment(p, q, r) -> bool:
        # r collinear with pq: is it inside the bounding box?
        return min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and min(
            p[1], q[1]
        ) <= r[1] <= max(p[1], q[1])

    if d1 == 0 and on_segment(c, d, a):
        return True
    if d2 == 0 and on_segment(c, d, b):
        return True
    if d3 == 0 and on_segment(a, b, c):
        return True
    if d4 == 0 and on_segment(a, b, d):
        return True
    return False


def is_simple_closed(polyline: ClosedPolyline) -> bool:
    """True iff no two non-adjacent edges intersect and no vertex is a spike.

    Broad phase on a uniform grid, float-filtered narrow phase, exact
    rational resolution of the undecided pairs.
    """
    v = polyline.vertices
    n = len(polyline)

    # Adjacent edges may only meet at their shared vertex: a collinear
    # doubling-back (spike) is a self-intersection.
    for i in range(n):
        prev_pt = v[i - 1]
        mid = v[i]
        nxt = v[(i + 1) % n]
        if _orient_exact(prev_pt, mid, nxt) == 0:
            back = (prev_pt[0] - mid[0]) * (nxt[0] - mid[0]) + (
                prev_pt[1] - mid[1]
            ) * (nxt[1] - mid[1])
            if back > 0:
                return False

    idx_i, idx_j = _impl.segment_candidate_pairs(v)
    if idx_i.shape[0] == 0:
        return True
    status = _impl.orientation_filter_pairs(v, idx_i, idx_j)
    if np.any(status == 1):
        return False
    for k in np.nonzero(status == 2)[0]:
        i, j = int(idx_i[k]), int(idx_j[k])
        if _segments_intersect_exact(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]):
            return False
    return True


def is_convex(polyline: ClosedPolyline) -> bool:
    """True iff all consecutive-edge cross products share one sign.

    Assumes the polyline is simple (an inscribed polygon of a convex curve
    then has single-signed turning).  Near-zero cross products relative to
    the edge scale count as flat and are accepted.
    """
    e = polyline.edges()
    en = np.roll(e, -1, axis=0)
    cross = e[:, 0] * en[:, 1] - e[:, 1] * en[:, 0]
    edge_scale = float((e * e).sum(axis=1).max())
    tol = CONVEXITY_FLAT_RTOL * edge_scale
    has_pos = bool(np.any(cross > tol))
    has_neg = bool(np.any(cross < -tol))
    if not has_pos and not has_neg:
        raise DegenerateInput("all turning angles are flat")
    return not (has_pos and has_neg)


def winding_number(polyline: ClosedPolyline, point) -> int:
    """Winding of the closed polyline around the point.

    Signed angle increments summed and divided by 2*pi; the residue from the
    nearest integer must stay below 0.1 or the accumulation is rejected.
    """
    pts = np.asarray(point, dtype=float).reshape(1, 2)
    angles, dists = _impl.winding_accumulate(polyline.vertices, pts)
    if dists[0] <= 1e-9 * max(polyline.scale(), 1e-300):
        raise PointOnCurve(f"point {point} lies on the curve")
    turns = angles[0] / (2.0 * math.pi)
    nearest = round(turns)
    if abs(turns - nearest) >= 0.1:
        raise InterpenError(f"winding accumulation inconsistent: {turns}")
    return int(nearest)


def winding_numbers(polyline: ClosedPolyline, points) -> np.ndarray:
    """Vectorized :func:`winding_number` over an (m, 2) point array."""
    pts = np.asarray(points, dtype=float)
    angles, dists = _impl.winding_accumulate(polyline.vertices, pts)
    if np.any(dists <= 1e-9 * max(polyline.scale(), 1e-300)):
        raise PointOnCurve("a probe point lies on the curve")
    turns = angles / (2.0 * math.pi)
    nearest = np.round(turns)
    if np.any(np.abs(turns - nearest) >= 0.1):
        raise InterpenError("winding accumulation inconsistent")
    return nearest.astype(int)


def polar_grid(center, radius: float, n: int, include_boundary: bool = True):
    """Deterministic n*n polar sampling of a disk (n radii times n angles)."""
    if n < 2:
        raise ValueError("grid resolution must be >= 2")
    r_max = radius if include_boundary else radius * (1.0 - 1.0 / (2 * n))
    radii = r_max * (np.arange(1, n + 1) / n)
    angles = 2.0 * np.pi * np.arange(n) / n
    rr, tt = np.meshgrid(radii, angles, indexing="ij")
    xs = center[0] + rr * np.cos(tt)
    ys = center[1] + rr * np.sin(tt)
    return xs.ravel(), ys.ravel()


#: A refined pair counts as a collision when its images coincide to this
#: fraction of the image diameter.
COLLISION_IMAGE_RTOL = 1e-6


@dataclass(frozen=True)
class InjectivityVerdict:
    injective: bool
    collision: tuple | None  # ((px,py), (qx,qy), image_dist, domain_dist)
    image_diameter: float

    def to_dict(self) -> dict:
        out = {"injective": self.injective, "image_diameter": self.image_diameter}
        if self.collision is not None:
            p, q, di, dd = self.collision
            out["collision"] = {
                "p": list(p),
                "q": list(q),
                "image_distance": di,
                "domain_distance": dd,
            }
        return out


def _image_diameter(images: np.ndarray) -> float:
    span = images.max(axis=0) - images.min(axis=0)
    return float(math.hypot(span[0], span[1]))


def collision_pairs(domain_pts, image_pts, image_tol, domain_min):
    """All index pairs with image distance < image_tol and domain distance >
    domain_min, found through a KD-tree on the images."""
    tree = cKDTree(image_pts)
    raw = tree.query_pairs(image_tol, output_type="ndarray")
    if raw.shape[0] == 0:
        return raw
    di = np.linalg.norm(image_pts[raw[:, 0]] - image_pts[raw[:, 1]], axis=1)
    dd = np.linalg.norm(domain_pts[raw[:, 0]] - domain_pts[raw[:, 1]], axis=1)
    keep = (di < image_tol) & (dd > domain_min)
    return raw[keep]


def _jacobian_of(mapping, x: float, y: float, scale: float) -> np.ndarray:
    """Analytic Jacobian when the map provides one, else central differences."""
    if hasattr(mapping, "jacobian_at"):
        return mapping.jacobian_at(x, y)
    h = 1e-6 * max(scale, 1.0)
    pts_x = np.array([x + h, x - h, x, x])
    pts_y = np.array([y, y, y + h, y - h])
    vals = mapping.evaluate_many(pts_x, pts_y)
    return np.array(
        [
            [(vals[0, 0] - vals[1, 0]) / (2 * h), (vals[2, 0] - vals[3, 0]) / (2 * h)],
            [(vals[0, 1] - vals[1, 1]) / (2 * h), (vals[2, 1] - vals[3, 1]) / (2 * h)],
        ]
    )


def _eval_point(mapping, x: float, y: float) -> np.ndarray:
    if hasattr(mapping, "evaluate"):
        return np.array(mapping.evaluate(x, y), dtype=float)
    return mapping.evaluate_many(np.array([x]), np.array([y]))[0]


def refine_collision_pair(mapping, p, q, disk, image_tol, domain_min, max_iter=60):
    """Gauss-Newton refinement of a candidate pair toward u(P) = u(Q).

    Minimum-norm steps on the underdetermined 2x4 system; points are kept
    inside the disk.  Returns ((P, Q, image_dist, domain_dist)) when the
    refined pair is a confirmed collision — images within image_tol while the
    points stay more than domain_min apart — and None otherwise.  Injective
    maps make the iteration collapse toward P = Q, which the domain filter
    rejects.
    """
    px, py = float(p[0]), float(p[1])
    qx, qy = float(q[0]), float(q[1])
    cx, cy = disk.center
    for _ in range(max_iter):
        f = _eval_point(mapping, px, py) - _eval_point(mapping, qx, qy)
        if math.hypot(f[0], f[1]) <= 0.01 * image_tol:
            break
        jp = _jacobian_of(mapping, px, py, disk.radius)
        jq = _jacobian_of(mapping, qx, qy, disk.radius)
        j = np.hstack([jp, -jq])
        gram = j @ j.T
        det = gram[0, 0] * gram[1, 1] - gram[0, 1] * gram[1, 0]
        if not (det > 0.0 and np.isfinite(det)):
            break
        lam = (
            np.array(
                [
                    gram[1, 1] * f[0] - gram[0, 1] * f[1],
                    -gram[1, 0] * f[0] + gram[0, 0] * f[1],
                ]
            )
            / det
        )
        step = j.T @ lam
        px, py, qx, qy = px - step[0], py - step[1], qx - step[2], qy - step[3]
        px, py = _clamp_into_disk(px, py, cx, cy, disk.radius)
        qx, qy = _clamp_into_disk(qx, qy, cx, cy, disk.radius)

    image_dist = float(
        np.linalg.norm(_eval_point(mapping, px, py) - _eval_point(mapping, qx, qy))
    )
    domain_dist = math.hypot(px - qx, py - qy)
    if image_dist < image_tol and domain_dist > domain_min:
        return ((float(px), float(py)), (float(qx), float(qy)), image_dist, domain_dist)
    return None


def _clamp_into_disk(x, y, cx, cy, radius):
    dx, dy = x - cx, y - cy
    rr = math.hypot(dx, dy)
    if rr > radius:
        f = radius / rr
        return cx + dx * f, cy + dy * f
    return x, y


def grid_injectivity(mapping, disk, n: int, max_refine: int = 8) -> InjectivityVerdict:
    """Scan an n*n polar grid of the disk for distant points with coincident
    images.

    `mapping` is anything with evaluate_many(xs, ys) -> (m, 2).  Candidate
    pairs have image distance below diameter/(10 n) at domain distance above
    radius/10; each candidate (best first) is then confirmed by Gauss-Newton
    refinement, which must drive the image distance to COLLISION_IMAGE_RTOL
    times the diameter without the pair collapsing.  Maps that are injective
    but have a critical point produce candidates near it, and the refinement
    dissolves them (the pair collapses), so they never yield a false verdict.
    """
    if n < 16:
        raise ValueError("grid_injectivity needs n >= 16")
    xs, ys = polar_grid(disk.center, disk.radius, n)
    domain = np.stack([xs, ys], axis=1)
    images = mapping.evaluate_many(xs, ys)
    diam = _image_diameter(images)
    if diam == 0.0:
        raise DegenerateInput("constant map")
    domain_min = disk.radius / 10.0
    pairs = collision_pairs(domain, images, diam / (10.0 * n), domain_min)
    if pairs.shape[0] == 0:
        return InjectivityVerdict(True, None, diam)

    di = np.linalg.norm(images[pairs[:, 0]] - images[pairs[:, 1]], axis=1)
    order = np.lexsort((pairs[:, 1], pairs[:, 0], di))
    image_tol = COLLISION_IMAGE_RTOL * diam
    for idx in order[:max_refine]:
        i, j = pairs[idx]
        confirmed = refine_collision_pair(
            mapping, domain[i], domain[j], disk, image_tol, domain_min
        )
        if confirmed is not None:
            return InjectivityVerdict(False, confirmed, diam)
    return InjectivityVerdict(True, None, diam)


@dataclass(frozen=True)
class SignField:
    positive: int
    negative: int
    near_zero: int

    def to_dict(self) -> dict:
        return {
            "positive": self.positive,
            "negative": self.negative,
            "near_zero": self.near_zero,
        }


def jacobian_sign_field(det_poly, disk, n: int) -> SignField:
    """Counts of Jacobian-determinant signs on an n*n polar grid.

    Values within 1e-10 of the grid maximum magnitude count as near-zero.
    """
    if n < 16:
        raise ValueError("jacobian_sign_field needs n >= 16")
    xs, ys = polar_grid(disk.center, disk.radius, n)
    vals = det_poly.evaluate_many(xs, ys)
    thresh = 1e-10 * float(np.abs(vals).max())
    pos = int(np.count_nonzero(vals > thresh))
    neg = int(np.count_nonzero(vals < -thresh))
    return SignField(pos, neg, vals.size - pos - neg)
