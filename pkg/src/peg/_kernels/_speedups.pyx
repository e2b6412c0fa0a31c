# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; see peg._kernels._purepy for the
reference semantics."""

from libc.math cimport atan2, cos, floor, hypot, sin, sqrt

import numpy as np


cdef inline double _cross(double ox, double oy, double px, double py,
                          double qx, double qy) nogil:
    return (px - ox) * (qy - oy) - (py - oy) * (qx - ox)


cdef inline bint _on_segment(double px, double py, double qx, double qy,
                             double rx, double ry) nogil:
    return (min(px, qx) <= rx <= max(px, qx)) and (min(py, qy) <= ry <= max(py, qy))


def first_crossing(double[:, ::1] pts, long long[::1] ia, long long[::1] ib):
    cdef Py_ssize_t k, n = ia.shape[0]
    cdef double a0x, a0y, a1x, a1y, b0x, b0y, b1x, b1y, d1, d2, d3, d4
    for k in range(n):
        a0x = pts[ia[k], 0]; a0y = pts[ia[k], 1]
        a1x = pts[ia[k] + 1, 0]; a1y = pts[ia[k] + 1, 1]
        b0x = pts[ib[k], 0]; b0y = pts[ib[k], 1]
        b1x = pts[ib[k] + 1, 0]; b1y = pts[ib[k] + 1, 1]
        d1 = _cross(b0x, b0y, b1x, b1y, a0x, a0y)
        d2 = _cross(b0x, b0y, b1x, b1y, a1x, a1y)
        d3 = _cross(a0x, a0y, a1x, a1y, b0x, b0y)
        d4 = _cross(a0x, a0y, a1x, a1y, b1x, b1y)
        if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and \
           ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
            return k
        if d1 == 0 and _on_segment(b0x, b0y, b1x, b1y, a0x, a0y):
            return k
        if d2 == 0 and _on_segment(b0x, b0y, b1x, b1y, a1x, a1y):
            return k
        if d3 == 0 and _on_segment(a0x, a0y, a1x, a1y, b0x, b0y):
            return k
        if d4 == 0 and _on_segment(a0x, a0y, a1x, a1y, b1x, b1y):
            return k
    return -1


def chord_walk(double[:, ::1] pts, double r):
    cdef Py_ssize_t n = pts.shape[0] - 1
    if r <= 0:
        raise ValueError("r must be positive")
    seg_arr = np.empty(n, dtype=np.int64)
    u_arr = np.empty(n, dtype=np.float64)
    cdef long long[::1] seg = seg_arr
    cdef double[::1] u = u_arr
    cdef Py_ssize_t i, s, m
    cdef double px, py, d, ax, ay, bx, by, qa, qb, qc, disc, root
    cdef bint found
    for i in range(n):
        px = pts[i, 0]; py = pts[i, 1]
        found = False
        for s in range(1, n):
            m = i - s
            if m < 0:
                m += n
            d = hypot(px - pts[m, 0], py - pts[m, 1])
            if d >= r:
                found = True
                break
        if not found:
            raise ValueError(
                "no chord of length r found while walking backwards; "
                "r is too large for this curve"
            )
        seg[i] = m
        ax = px - pts[m, 0]; ay = py - pts[m, 1]
        bx = pts[m + 1, 0] - pts[m, 0]; by = pts[m + 1, 1] - pts[m, 1]
        qa = bx * bx + by * by
        qb = -2.0 * (ax * bx + ay * by)
        qc = ax * ax + ay * ay - r * r
        disc = qb * qb - 4.0 * qa * qc
        if disc < 0:
            disc = 0
        root = (-qb - sqrt(disc)) / (2.0 * qa)
        if root < 0:
            root = 0
        elif root > 1:
            root = 1
        u[i] = root
    return seg_arr, u_arr


cdef inline Py_ssize_t _locate(double[::1] cum, double x) nogil:
    cdef Py_ssize_t lo = 0, hi = cum.shape[0] - 1, mid
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if cum[mid] <= x:
            lo = mid
        else:
            hi = mid
    return lo


cdef inline void _embed(double[:, ::1] pts, double[::1] cum, double total,
                        double s, double t, int two_n, double* out) nogil:
    cdef double x, seg, u, ax, ay, bx, by, dx, dy, mod, ang
    cdef Py_ssize_t i

    x = (s - floor(s)) * total
    i = _locate(cum, x)
    seg = cum[i + 1] - cum[i]
    u = (x - cum[i]) / seg if seg > 0 else 0.0
    ax = pts[i, 0] + u * (pts[i + 1, 0] - pts[i, 0])
    ay = pts[i, 1] + u * (pts[i + 1, 1] - pts[i, 1])

    x = (t - floor(t)) * total
    i = _locate(cum, x)
    seg = cum[i + 1] - cum[i]
    u = (x - cum[i]) / seg if seg > 0 else 0.0
    bx = pts[i, 0] + u * (pts[i + 1, 0] - pts[i, 0])
    by = pts[i, 1] + u * (pts[i + 1, 1] - pts[i, 1])

    out[0] = 0.5 * (ax + bx)
    out[1] = 0.5 * (ay + by)
    dx = ax - bx
    dy = ay - by
    mod = hypot(dx, dy)
    if mod == 0.0:
        out[2] = 0.0
        out[3] = 0.0
        return
    ang = two_n * atan2(dy, dx)
    out[2] = mod * cos(ang)
    out[3] = mod * sin(ang)


def embed_point(double[:, ::1] pts, double[::1] cum, double total,
                double s, double t, int two_n):
    out_arr = np.empty(4, dtype=np.float64)
    cdef double[::1] out = out_arr
    _embed(pts, cum, total, s, t, two_n, &out[0])
    return out_arr


cdef inline void _resid(double[:, ::1] pts, double[::1] cum, double total,
                        double* q, int two_n, double* out) nogil:
    cdef double e1[4]
    cdef double e2[4]
    cdef int k
    _embed(pts, cum, total, q[0], q[1], two_n, e1)
    _embed(pts, cum, total, q[2], q[3], two_n, e2)
    for k in range(4):
        out[k] = e1[k] - e2[k]


cdef inline double _sumsq(double* r) nogil:
    return r[0] * r[0] + r[1] * r[1] + r[2] * r[2] + r[3] * r[3]


cdef inline bint _solve4(double* a, double* b, double* x) nogil:
    # Solve the 4x4 system (row-major a) with partial pivoting; False if singular.
    cdef double m[20]
    cdef int i, j, k, piv
    cdef double mx, f
    for i in range(4):
        for j in range(4):
            m[i * 5 + j] = a[i * 4 + j]
        m[i * 5 + 4] = b[i]
    for k in range(4):
        piv = k
        mx = m[k * 5 + k]
        if mx < 0:
            mx = -mx
        for i in range(k + 1, 4):
            f = m[i * 5 + k]
            if f < 0:
                f = -f
            if f > mx:
                mx = f
                piv = i
        if mx == 0.0:
            return False
        if piv != k:
            for j in range(5):
                f = m[k * 5 + j]
                m[k * 5 + j] = m[piv * 5 + j]
                m[piv * 5 + j] = f
        for i in range(k + 1, 4):
            f = m[i * 5 + k] / m[k * 5 + k]
            for j in range(k, 5):
                m[i * 5 + j] -= f * m[k * 5 + j]
    for k in range(3, -1, -1):
        f = m[k * 5 + 4]
        for j in range(k + 1, 4):
            f -= m[k * 5 + j] * x[j]
        x[k] = f / m[k * 5 + k]
    return True


def refine_collision(double[:, ::1] pts, double[::1] cum, double total,
                     double[::1] q0, int two_n, double step0, double min_step,
                     int max_iter):
    """Damped Gauss-Newton on the collision residual with a coordinate
    pattern-sweep fallback; see _purepy.refine_collision."""
    cdef double q[4]
    cdef double qt[4]
    cdef double r[4]
    cdef double rt[4]
    cdef double jac[16]
    cdef double negr[4]
    cdef double step[4]
    cdef double best, fn, h_pat, lam, fd, old
    cdef int c, it, ls, k
    cdef bint improved, solved
    cdef double sign
    for c in range(4):
        q[c] = q0[c] - floor(q0[c])
    fd = 1e-8
    h_pat = step0
    with nogil:
        _resid(pts, cum, total, q, two_n, r)
        best = _sumsq(r)
        for it in range(max_iter):
            if best < 1e-26:
                break
            for c in range(4):
                for k in range(4):
                    qt[k] = q[k]
                qt[c] += fd
                _resid(pts, cum, total, qt, two_n, rt)
                for k in range(4):
                    jac[k * 4 + c] = (rt[k] - r[k]) / fd
            for k in range(4):
                negr[k] = -r[k]
            solved = _solve4(jac, negr, step)
            improved = False
            if solved:
                lam = 1.0
                for ls in range(25):
                    for k in range(4):
                        qt[k] = q[k] + lam * step[k]
                        qt[k] -= floor(qt[k])
                    _resid(pts, cum, total, qt, two_n, rt)
                    fn = _sumsq(rt)
                    if fn < best:
                        for k in range(4):
                            q[k] = qt[k]
                            r[k] = rt[k]
                        best = fn
                        improved = True
                        break
                    lam *= 0.5
            if not improved:
                for c in range(4):
                    sign = 1.0
                    while True:
                        for k in range(4):
                            qt[k] = q[k]
                        qt[c] += sign * h_pat
                        qt[c] -= floor(qt[c])
                        _resid(pts, cum, total, qt, two_n, rt)
                        fn = _sumsq(rt)
                        if fn < best:
                            for k in range(4):
                                q[k] = qt[k]
                                r[k] = rt[k]
                            best = fn
                            improved = True
                        if sign < 0:
                            break
                        sign = -1.0
                if not improved:
                    h_pat *= 0.5
                    if h_pat < min_step:
                        break
    return np.array([q[0], q[1], q[2], q[3]]), sqrt(best)
