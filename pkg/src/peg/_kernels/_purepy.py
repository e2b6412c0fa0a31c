"""Pure-Python / numpy implementations of the hot kernels.

Semantics match peg._kernels._speedups exactly; see that module for the
tight-loop versions.
"""

from __future__ import annotations

import math

import numpy as np


def _on_segment(px, py, qx, qy, rx, ry):
    # r collinear with pq assumed; is r within the bounding box of pq?
    return min(px, qx) <= rx <= max(px, qx) and min(py, qy) <= ry <= max(py, qy)


def first_crossing(pts: np.ndarray, ia: np.ndarray, ib: np.ndarray) -> int:
    """Index into (ia, ib) of the first candidate segment pair that meets,
    touching included, or -1.  Segment k runs from pts[k] to pts[k+1]."""
    if ia.size == 0:
        return -1
    a0 = pts[ia]
    a1 = pts[ia + 1]
    b0 = pts[ib]
    b1 = pts[ib + 1]

    def cross(o, p, q):
        return (p[:, 0] - o[:, 0]) * (q[:, 1] - o[:, 1]) - (p[:, 1] - o[:, 1]) * (q[:, 0] - o[:, 0])

    d1 = cross(b0, b1, a0)
    d2 = cross(b0, b1, a1)
    d3 = cross(a0, a1, b0)
    d4 = cross(a0, a1, b1)
    proper = ((d1 > 0) & (d2 < 0) | (d1 < 0) & (d2 > 0)) & (
        (d3 > 0) & (d4 < 0) | (d3 < 0) & (d4 > 0)
    )
    hits = proper.copy()
    for d, seg, pt in ((d1, (b0, b1), a0), (d2, (b0, b1), a1), (d3, (a0, a1), b0), (d4, (a0, a1), b1)):
        coll = d == 0
        if np.any(coll):
            inside = (
                (np.minimum(seg[0][:, 0], seg[1][:, 0]) <= pt[:, 0])
                & (pt[:, 0] <= np.maximum(seg[0][:, 0], seg[1][:, 0]))
                & (np.minimum(seg[0][:, 1], seg[1][:, 1]) <= pt[:, 1])
                & (pt[:, 1] <= np.maximum(seg[0][:, 1], seg[1][:, 1]))
            )
            hits |= coll & inside
    idx = np.flatnonzero(hits)
    return int(idx[0]) if idx.size else -1


def chord_walk(pts: np.ndarray, r: float):
    """For every vertex i of the closed polyline (pts has N+1 rows with
    pts[N] == pts[0]), walk backwards along the curve and find the first
    point at straight-line distance exactly r.

    Returns (seg, u): the crossing lies on the segment from pts[seg[i]] to
    pts[seg[i]+1] at fraction u[i].  Distance to a segment's points is convex,
    so scanning vertex distances finds the first crossing bracket.
    """
    n = pts.shape[0] - 1
    if r <= 0:
        raise ValueError("r must be positive")
    p = pts[:n]
    seg = np.full(n, -1, dtype=np.int64)
    active = np.arange(n)
    for s in range(1, n):
        tgt = (active - s) % n
        d = np.hypot(p[active, 0] - p[tgt, 0], p[active, 1] - p[tgt, 1])
        done = d >= r
        if np.any(done):
            di = active[done]
            seg[di] = (di - s) % n
            active = active[~done]
            if active.size == 0:
                break
    if np.any(seg < 0):
        raise ValueError(
            "no chord of length r found while walking backwards; "
            "r is too large for this curve"
        )
    # Solve |A - u B|^2 = r^2 on each bracket segment, taking the root where
    # the distance decreases through r (the first crossing walking backwards).
    m = seg
    A = p - pts[m]
    B = pts[m + 1] - pts[m]
    a = np.einsum("ij,ij->i", B, B)
    b = -2.0 * np.einsum("ij,ij->i", A, B)
    c = np.einsum("ij,ij->i", A, A) - r * r
    disc = np.maximum(b * b - 4.0 * a * c, 0.0)
    u = (-b - np.sqrt(disc)) / (2.0 * a)
    return seg, np.clip(u, 0.0, 1.0)


def _locate(cum: np.ndarray, x: float) -> int:
    i = int(np.searchsorted(cum, x, side="right")) - 1
    n = cum.shape[0] - 2
    return min(max(i, 0), n)


def embed_point(pts, cum, total, s, t, two_n):
    """Collision-space image of the unordered pair {s, t}: midpoint plus the
    modulus-preserving rescaled chord power |d| * exp(i * 2n * arg d)."""
    out = np.empty(4, dtype=np.float64)
    _embed(pts, cum, total, s, t, two_n, out)
    return out


def _point(pts, cum, total, s):
    x = (s - math.floor(s)) * total
    i = _locate(cum, x)
    seg = cum[i + 1] - cum[i]
    u = (x - cum[i]) / seg if seg > 0 else 0.0
    return (
        pts[i, 0] + u * (pts[i + 1, 0] - pts[i, 0]),
        pts[i, 1] + u * (pts[i + 1, 1] - pts[i, 1]),
    )


def _embed(pts, cum, total, s, t, two_n, out):
    ax, ay = _point(pts, cum, total, s)
    bx, by = _point(pts, cum, total, t)
    out[0] = 0.5 * (ax + bx)
    out[1] = 0.5 * (ay + by)
    dx = ax - bx
    dy = ay - by
    mod = math.hypot(dx, dy)
    if mod == 0.0:
        out[2] = 0.0
        out[3] = 0.0
        return
    ang = two_n * math.atan2(dy, dx)
    out[2] = mod * math.cos(ang)
    out[3] = mod * math.sin(ang)


def refine_collision(pts, cum, total, q0, two_n, step0, min_step, max_iter):
    """Minimise the collision residual |embed(s,t) - embed(s',t')| over the
    four curve parameters: damped Gauss-Newton steps (finite-difference
    Jacobian), falling back to a coordinate pattern sweep whenever a Newton
    step cannot improve (e.g. across polyline kinks)."""
    q = np.asarray(q0, dtype=np.float64) % 1.0
    e1 = np.empty(4)
    e2 = np.empty(4)

    def resid(qq):
        _embed(pts, cum, total, qq[0], qq[1], two_n, e1)
        _embed(pts, cum, total, qq[2], qq[3], two_n, e2)
        return e1 - e2

    r = resid(q)
    best = float(r @ r)
    h_pat = float(step0)
    fd = 1e-8
    for _ in range(max_iter):
        if best < 1e-26:
            break
        jac = np.empty((4, 4))
        for c in range(4):
            qc = q.copy()
            qc[c] += fd
            jac[:, c] = (resid(qc) - r) / fd
        try:
            step = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError:
            step = None
        improved = False
        if step is not None and np.all(np.isfinite(step)):
            lam = 1.0
            for _ in range(25):
                qn = (q + lam * step) % 1.0
                rn = resid(qn).copy()
                fn = float(rn @ rn)
                if fn < best:
                    q, r, best = qn, rn, fn
                    improved = True
                    break
                lam *= 0.5
        if not improved:
            for c in range(4):
                for sign in (1.0, -1.0):
                    qn = q.copy()
                    qn[c] = (qn[c] + sign * h_pat) % 1.0
                    rn = resid(qn).copy()
                    fn = float(rn @ rn)
                    if fn < best:
                        q, r, best = qn, rn, fn
                        improved = True
            if not improved:
                h_pat *= 0.5
                if h_pat < min_step:
                    break
    return q, math.sqrt(best)
