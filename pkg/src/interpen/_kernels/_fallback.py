"""Pure numpy implementations of the kernel contract.

Semantics must match interpen._kernels._core exactly: same candidate-pair
guarantees, same orientation filter constant, same term ordering in the
polynomial evaluation so results agree bit-for-bit where it matters.
"""

import numpy as np

BACKEND_NAME = "python"

# Static filter constant for the 2D orientation predicate: |det| below
# ORIENT_EPS * (|term1| + |term2|) cannot be signed reliably in doubles.
ORIENT_EPS = 3.3306690738754716e-16


def poly_eval_grid(powers, coeffs, xs, ys):
    """Sum of coeffs[k] * xs**powers[k,0] * ys**powers[k,1], term-ordered.

    Powers are computed by cumulative multiplication and terms accumulated in
    the given order, mirroring the compiled core's loop exactly.
    """
    m = xs.shape[0]
    deg_x = int(powers[:, 0].max(initial=0))
    deg_y = int(powers[:, 1].max(initial=0))
    xp = np.empty((deg_x + 1, m))
    yp = np.empty((deg_y + 1, m))
    xp[0] = 1.0
    yp[0] = 1.0
    for i in range(1, deg_x + 1):
        xp[i] = xp[i - 1] * xs
    for j in range(1, deg_y + 1):
        yp[j] = yp[j - 1] * ys
    out = np.zeros(m)
    for k in range(powers.shape[0]):
        out += coeffs[k] * (xp[powers[k, 0]] * yp[powers[k, 1]])
    return out


def segment_candidate_pairs(vertices):
    """Candidate non-adjacent edge pairs from a uniform-grid broad phase.

    Edge i runs from vertex i to vertex (i+1) mod n.  Returns (i, j) arrays
    with i < j covering every pair of edges whose bounding boxes can
    intersect; adjacency (|i-j| = 1 mod n) is already filtered out.
    """
    v = np.asarray(vertices, dtype=float)
    n = v.shape[0]
    nxt = np.roll(v, -1, axis=0)
    lo = np.minimum(v, nxt)
    hi = np.maximum(v, nxt)
    extent = float((hi - lo).max())
    span = float((v.max(axis=0) - v.min(axis=0)).max())
    cell = max(extent, span * 1e-9, 1e-300)

    ix0 = np.floor(lo[:, 0] / cell).astype(np.int64)
    iy0 = np.floor(lo[:, 1] / cell).astype(np.int64)
    ix1 = np.floor(hi[:, 0] / cell).astype(np.int64)
    iy1 = np.floor(hi[:, 1] / cell).astype(np.int64)

    # Each edge spans at most 2x2 cells since the cell size bounds its extent.
    edge_ids = np.arange(n, dtype=np.int64)
    cells_x = np.concatenate([ix0, ix1, ix0, ix1])
    cells_y = np.concatenate([iy0, iy0, iy1, iy1])
    owners = np.concatenate([edge_ids] * 4)
    keys = np.stack([cells_x, cells_y], axis=1)
    uniq_cells, cell_idx = np.unique(keys, axis=0, return_inverse=True)
    entry = np.unique(np.stack([cell_idx, owners], axis=1), axis=0)

    order = np.argsort(entry[:, 0], kind="stable")
    entry = entry[order]
    boundaries = np.searchsorted(entry[:, 0], np.arange(uniq_cells.shape[0] + 1))

    pairs_i = []
    pairs_j = []
    for c in range(uniq_cells.shape[0]):
        members = entry[boundaries[c] : boundaries[c + 1], 1]
        g = members.shape[0]
        if g < 2:
            continue
        a, b = np.triu_indices(g, k=1)
        pairs_i.append(members[a])
        pairs_j.append(members[b])
    if not pairs_i:
        return (np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64))

    pi = np.concatenate(pairs_i)
    pj = np.concatenate(pairs_j)
    both = np.unique(np.stack([np.minimum(pi, pj), np.maximum(pi, pj)], axis=1), axis=0)
    pi, pj = both[:, 0], both[:, 1]
    gap = pj - pi
    keep = (gap > 1) & (gap < n - 1)
    return (pi[keep], pj[keep])


def _orient_filtered(ax, ay, bx, by, cx, cy):
    """Filtered orientation sign: +1/-1 when certain, 0 when uncertain."""
    t1 = (bx - ax) * (cy - ay)
    t2 = (by - ay) * (cx - ax)
    det = t1 - t2
    err = ORIENT_EPS * (np.abs(t1) + np.abs(t2))
    sign = np.zeros_like(det, dtype=np.int8)
    sign[det > err] = 1
    sign[det < -err] = -1
    return sign


def orientation_filter_pairs(vertices, idx_i, idx_j):
    """Classify candidate edge pairs: 0 disjoint, 1 intersecting, 2 uncertain.

    Certainty comes from the static float filter; pairs whose verdict depends
    on a near-zero orientation are flagged 2 for exact re-evaluation by the
    caller.
    """
    v = np.asarray(vertices, dtype=float)
    n = v.shape[0]
    a = v[idx_i]
    b = v[(idx_i + 1) % n]
    c = v[idx_j]
    d = v[(idx_j + 1) % n]

    d1 = _orient_filtered(c[:, 0], c[:, 1], d[:, 0], d[:, 1], a[:, 0], a[:, 1])
    d2 = _orient_filtered(c[:, 0], c[:, 1], d[:, 0], d[:, 1], b[:, 0], b[:, 1])
    d3 = _orient_filtered(a[:, 0], a[:, 1], b[:, 0], b[:, 1], c[:, 0], c[:, 1])
    d4 = _orient_filtered(a[:, 0], a[:, 1], b[:, 0], b[:, 1], d[:, 0], d[:, 1])

    status = np.full(idx_i.shape[0], 2, dtype=np.int8)
    separated = ((d1 * d2 == 1) & (d1 != 0)) | ((d3 * d4 == 1) & (d3 != 0))
    status[separated] = 0
    crossing = (d1 * d2 == -1) & (d3 * d4 == -1)
    status[crossing & ~separated] = 1
    all_certain = (d1 != 0) & (d2 != 0) & (d3 != 0) & (d4 != 0)
    status[all_certain & ~crossing & ~separated] = 0
    return status


def winding_accumulate(vertices, points):
    """Signed angle totals of the closed polyline around each point.

    Returns (angle_sum, min_distance) per point; min_distance is the exact
    distance to the polyline, used for the point-on-curve guard.
    """
    v = np.asarray(vertices, dtype=float)
    p = np.asarray(points, dtype=float)
    w = v[None, :, :] - p[:, None, :]  # (m, n, 2)
    wn = np.roll(w, -1, axis=1)
    cross = w[:, :, 0] * wn[:, :, 1] - w[:, :, 1] * wn[:, :, 0]
    dot = w[:, :, 0] * wn[:, :, 0] + w[:, :, 1] * wn[:, :, 1]
    angles = np.arctan2(cross, dot).sum(axis=1)

    e = wn - w  # edge vectors, independent of the point
    ee = (e * e).sum(axis=2)
    t = np.clip(-(w * e).sum(axis=2) / np.maximum(ee, 1e-300), 0.0, 1.0)
    foot = w + t[:, :, None] * e
    dist = np.sqrt((foot * foot).sum(axis=2)).min(axis=1)
    return angles, dist


def poisson_apply(samples, unit_points, points, chunk=512):
    """Poisson-kernel quadrature of boundary samples at interior points.

    samples[j] is the boundary value at the j-th uniform angle, unit_points[j]
    the corresponding point of the unit circle; the kernel is
    (1 - |p|^2) / |p - e_j|^2, averaged over j.
    """
    samples = np.asarray(samples, dtype=float)
    unit = np.asarray(unit_points, dtype=float)
    pts = np.asarray(points, dtype=float)
    n = samples.shape[0]
    out = np.empty((pts.shape[0], 2))
    for start in range(0, pts.shape[0], chunk):
        p = pts[start : start + chunk]
        dx = p[:, 0:1] - unit[None, :, 0]
        dy = p[:, 1:2] - unit[None, :, 1]
        den = dx * dx + dy * dy
        num = 1.0 - (p[:, 0] ** 2 + p[:, 1] ** 2)
        w = num[:, None] / den
        out[start : start + chunk] = (w @ samples) / n
    return out
