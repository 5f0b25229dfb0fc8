# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contract and accumulation order as _fallback."""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan2, fabs, floor, sqrt

cnp.import_array()

BACKEND_NAME = "compiled"

cdef double ORIENT_EPS = 3.3306690738754716e-16


def poly_eval_grid(powers, coeffs, xs, ys):
    cdef cnp.int64_t[:, :] pw = np.ascontiguousarray(powers, dtype=np.int64)
    cdef double[:] cs = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef double[:] x = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[:] y = np.ascontiguousarray(ys, dtype=np.float64)
    cdef Py_ssize_t m = x.shape[0], k = pw.shape[0]
    cdef Py_ssize_t deg_x = 0, deg_y = 0, i, j, t, pi, pj
    for t in range(k):
        if pw[t, 0] > deg_x:
            deg_x = pw[t, 0]
        if pw[t, 1] > deg_y:
            deg_y = pw[t, 1]
    out_arr = np.zeros(m)
    xp_arr = np.empty((deg_x + 1, m))
    yp_arr = np.empty((deg_y + 1, m))
    cdef double[:] out = out_arr
    cdef double[:, :] xp = xp_arr
    cdef double[:, :] yp = yp_arr
    cdef double c
    for i in range(m):
        xp[0, i] = 1.0
        yp[0, i] = 1.0
    for j in range(1, deg_x + 1):
        for i in range(m):
            xp[j, i] = xp[j - 1, i] * x[i]
    for j in range(1, deg_y + 1):
        for i in range(m):
            yp[j, i] = yp[j - 1, i] * y[i]
    for t in range(k):
        c = cs[t]
        pi = pw[t, 0]
        pj = pw[t, 1]
        for i in range(m):
            out[i] += c * (xp[pi, i] * yp[pj, i])
    return out_arr


def segment_candidate_pairs(vertices):
    cdef double[:, :] v = np.ascontiguousarray(vertices, dtype=np.float64)
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t i, nxt
    cdef double lox, loy, hix, hiy, extent = 0.0, e
    cdef double minx = v[0, 0], maxx = v[0, 0], miny = v[0, 1], maxy = v[0, 1]

    for i in range(n):
        nxt = (i + 1) % n
        e = fabs(v[nxt, 0] - v[i, 0])
        if e > extent:
            extent = e
        e = fabs(v[nxt, 1] - v[i, 1])
        if e > extent:
            extent = e
        if v[i, 0] < minx:
            minx = v[i, 0]
        if v[i, 0] > maxx:
            maxx = v[i, 0]
        if v[i, 1] < miny:
            miny = v[i, 1]
        if v[i, 1] > maxy:
            maxy = v[i, 1]
    cdef double span = maxx - minx
    if maxy - miny > span:
        span = maxy - miny
    cdef double cell = extent
    if span * 1e-9 > cell:
        cell = span * 1e-9
    if cell < 1e-300:
        cell = 1e-300

    cdef dict grid = {}
    cdef long ix0, iy0, ix1, iy1, cx, cy
    cdef tuple key
    for i in range(n):
        nxt = (i + 1) % n
        lox = v[i, 0] if v[i, 0] < v[nxt, 0] else v[nxt, 0]
        hix = v[i, 0] if v[i, 0] > v[nxt, 0] else v[nxt, 0]
        loy = v[i, 1] if v[i, 1] < v[nxt, 1] else v[nxt, 1]
        hiy = v[i, 1] if v[i, 1] > v[nxt, 1] else v[nxt, 1]
        ix0 = <long>floor(lox / cell)
        ix1 = <long>floor(hix / cell)
        iy0 = <long>floor(loy / cell)
        iy1 = <long>floor(hiy / cell)
        for cx in range(ix0, ix1 + 1):
            for cy in range(iy0, iy1 + 1):
                key = (cx, cy)
                if key in grid:
                    (<list>grid[key]).append(i)
                else:
                    grid[key] = [i]

    cdef set seen = set()
    cdef list out_i = [], out_j = []
    cdef list members
    cdef Py_ssize_t a, b, gi, gj, g
    cdef long gap
    cdef long long code
    for members in grid.values():
        g = len(members)
        if g < 2:
            continue
        for a in range(g):
            gi = <Py_ssize_t>members[a]
            for b in range(a + 1, g):
                gj = <Py_ssize_t>members[b]
                if gi < gj:
                    gap = gj - gi
                else:
                    gap = gi - gj
                if gap <= 1 or gap >= n - 1:
                    continue
                if gi < gj:
                    code = (<long long>gi << 32) | <long long>gj
                else:
                    code = (<long long>gj << 32) | <long long>gi
                if code in seen:
                    continue
                seen.add(code)
                if gi < gj:
                    out_i.append(gi)
                    out_j.append(gj)
                else:
                    out_i.append(gj)
                    out_j.append(gi)
    return (np.array(out_i, dtype=np.int64), np.array(out_j, dtype=np.int64))


cdef inline int _orient_sign(double ax, double ay, double bx, double by,
                             double cx, double cy) nogil:
    cdef double t1 = (bx - ax) * (cy - ay)
    cdef double t2 = (by - ay) * (cx - ax)
    cdef double det = t1 - t2
    cdef double err = ORIENT_EPS * (fabs(t1) + fabs(t2))
    if det > err:
        return 1
    if det < -err:
        return -1
    return 0


def orientation_filter_pairs(vertices, idx_i, idx_j):
    cdef double[:, :] v = np.ascontiguousarray(vertices, dtype=np.float64)
    cdef cnp.int64_t[:] ii = np.ascontiguousarray(idx_i, dtype=np.int64)
    cdef cnp.int64_t[:] jj = np.ascontiguousarray(idx_j, dtype=np.int64)
    cdef Py_ssize_t n = v.shape[0], m = ii.shape[0], k
    out_arr = np.empty(m, dtype=np.int8)
    cdef signed char[:] out = out_arr
    cdef Py_ssize_t ia, ib, ja, jb
    cdef int d1, d2, d3, d4
    for k in range(m):
        ia = ii[k]
        ib = (ia + 1) % n
        ja = jj[k]
        jb = (ja + 1) % n
        d1 = _orient_sign(v[ja, 0], v[ja, 1], v[jb, 0], v[jb, 1], v[ia, 0], v[ia, 1])
        d2 = _orient_sign(v[ja, 0], v[ja, 1], v[jb, 0], v[jb, 1], v[ib, 0], v[ib, 1])
        d3 = _orient_sign(v[ia, 0], v[ia, 1], v[ib, 0], v[ib, 1], v[ja, 0], v[ja, 1])
        d4 = _orient_sign(v[ia, 0], v[ia, 1], v[ib, 0], v[ib, 1], v[jb, 0], v[jb, 1])
        if (d1 * d2 == 1) or (d3 * d4 == 1):
            out[k] = 0
        elif d1 * d2 == -1 and d3 * d4 == -1:
            out[k] = 1
        elif d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0:
            out[k] = 0
        else:
            out[k] = 2
    return out_arr


def winding_accumulate(vertices, points):
    cdef double[:, :] v = np.ascontiguousarray(vertices, dtype=np.float64)
    cdef double[:, :] p = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n = v.shape[0], m = p.shape[0], i, k, nxt
    angles_arr = np.empty(m)
    dist_arr = np.empty(m)
    cdef double[:] angles = angles_arr
    cdef double[:] dists = dist_arr
    cdef double wx, wy, nx, ny, cross, dot, acc, best, ex, ey, ee, t, fx, fy, dd
    for k in range(m):
        acc = 0.0
        best = 1e308
        for i in range(n):
            nxt = (i + 1) % n
            wx = v[i, 0] - p[k, 0]
            wy = v[i, 1] - p[k, 1]
            nx = v[nxt, 0] - p[k, 0]
            ny = v[nxt, 1] - p[k, 1]
            cross = wx * ny - wy * nx
            dot = wx * nx + wy * ny
            acc += atan2(cross, dot)
            ex = nx - wx
            ey = ny - wy
            ee = ex * ex + ey * ey
            if ee < 1e-300:
                ee = 1e-300
            t = -(wx * ex + wy * ey) / ee
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
            fx = wx + t * ex
            fy = wy + t * ey
            dd = sqrt(fx * fx + fy * fy)
            if dd < best:
                best = dd
        angles[k] = acc
        dists[k] = best
    return angles_arr, dist_arr


def poisson_apply(samples, unit_points, points, chunk=512):
    cdef double[:, :] s = np.ascontiguousarray(samples, dtype=np.float64)
    cdef double[:, :] u = np.ascontiguousarray(unit_points, dtype=np.float64)
    cdef double[:, :] p = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n = s.shape[0], m = p.shape[0], i, j
    out_arr = np.empty((m, 2))
    cdef double[:, :] out = out_arr
    cdef double px, py, num, dx, dy, w, acc0, acc1
    for i in range(m):
        px = p[i, 0]
        py = p[i, 1]
        num = 1.0 - (px * px + py * py)
        acc0 = 0.0
        acc1 = 0.0
        for j in range(n):
            dx = px - u[j, 0]
            dy = py - u[j, 1]
            w = num / (dx * dx + dy * dy)
            acc0 += w * s[j, 0]
            acc1 += w * s[j, 1]
        out[i, 0] = acc0 / n
        out[i, 1] = acc1 / n
    return out_arr
