"""Sampled Jordan curves: simplicity checks, Lipschitz window certificates,
and the fixed-chord-length cycle constructions (offsets, midpoints, winding
degrees).

A curve is a closed polyline with arc-length parametrization: parameter
t in [0, 1) is (arc length from vertex 0) / perimeter.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree, ConvexHull

from . import _kernels

Point2 = tuple[float, float]

MIN_VERTICES = 8


class InvalidCurveError(ValueError):
    pass


class EmptyCycleError(ValueError):
    """No chord of the requested length exists on the curve."""


class OutOfChartError(ValueError):
    pass


class ResolutionError(ValueError):
    """The sampling is too coarse to resolve the requested quantity."""


class PlaneCurve:
    """Closed polyline sampling a Jordan curve.

    Vertices are stored as an (N, 2) float array; the closing edge from the
    last vertex back to the first is implicit.  Consecutive vertices must be
    distinct and all coordinates finite; simplicity is checked by is_simple,
    not at construction.
    """

    def __init__(self, vertices, source: str = "unnamed"):
        v = np.asarray(vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] != 2:
            raise InvalidCurveError("vertices must be an (N, 2) array")
        if v.shape[0] < MIN_VERTICES:
            raise InvalidCurveError(f"need at least {MIN_VERTICES} vertices, got {v.shape[0]}")
        if not np.all(np.isfinite(v)):
            raise InvalidCurveError("vertices must be finite")
        closed = np.vstack([v, v[:1]])
        seglen = np.hypot(*(closed[1:] - closed[:-1]).T)
        if np.any(seglen == 0):
            raise InvalidCurveError("consecutive vertices must be distinct (degenerate segment)")
        self.vertices = v
        self.source = source
        self._closed = np.ascontiguousarray(closed)
        self._seglen = seglen
        self._cum = np.concatenate([[0.0], np.cumsum(seglen)])
        self.perimeter = float(self._cum[-1])
        self._diameter = None

    def __len__(self):
        return self.vertices.shape[0]

    def __repr__(self):
        return f"PlaneCurve({len(self)} vertices, source={self.source!r})"

    @property
    def closed_points(self) -> np.ndarray:
        return self._closed

    @property
    def cumulative_lengths(self) -> np.ndarray:
        return self._cum

    def vertex_params(self) -> np.ndarray:
        """Arc-length parameter of each vertex."""
        return self._cum[:-1] / self.perimeter

    def point_at(self, params) -> np.ndarray:
        """Interpolated curve points at arc-length parameters (mod 1)."""
        t = np.atleast_1d(np.asarray(params, dtype=np.float64))
        x = (t - np.floor(t)) * self.perimeter
        idx = np.clip(np.searchsorted(self._cum, x, side="right") - 1, 0, len(self) - 1)
        seg = self._seglen[idx]
        u = np.where(seg > 0, (x - self._cum[idx]) / seg, 0.0)
        p = self._closed[idx] + u[:, None] * (self._closed[idx + 1] - self._closed[idx])
        return p if np.ndim(params) else p[0]

    def diameter(self) -> float:
        """Exact diameter of the vertex set (rotating calipers on the hull)."""
        if self._diameter is not None:
            return self._diameter
        hull = self.vertices[ConvexHull(self.vertices).vertices]
        h = len(hull)
        best = 0.0
        j = 1
        for i in range(h):
            ni = (i + 1) % h
            ex, ey = hull[ni] - hull[i]
            while True:
                nj = (j + 1) % h
                qx, qy = hull[nj] - hull[j]
                if ex * qy - ey * qx > 0:
                    j = nj
                else:
                    break
            for q in (hull[j], hull[(j + 1) % h]):
                best = max(best, float(np.hypot(*(hull[i] - q))), float(np.hypot(*(hull[ni] - q))))
        self._diameter = best
        return best

    def transformed(self, angle: float = 0.0, offset=(0.0, 0.0)) -> "PlaneCurve":
        c, s = math.cos(angle), math.sin(angle)
        rot = np.array([[c, -s], [s, c]])
        return PlaneCurve(self.vertices @ rot.T + np.asarray(offset), source=f"{self.source}|moved")

    # -- ingestion ---------------------------------------------------------

    @staticmethod
    def from_json(path) -> "PlaneCurve":
        data = json.loads(Path(path).read_text())
        return PlaneCurve(data["vertices"], source=str(path))

    @staticmethod
    def from_csv(path) -> "PlaneCurve":
        rows = []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row:
                    continue
                try:
                    rows.append((float(row[0]), float(row[1])))
                except ValueError:
                    continue  # header line
        return PlaneCurve(rows, source=str(path))


def circle(radius: float = 1.0, samples: int = 4096) -> PlaneCurve:
    t = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    return PlaneCurve(
        np.column_stack([radius * np.cos(t), radius * np.sin(t)]),
        source=f"circle({radius})",
    )


def ellipse(a: float = 2.0, b: float = 1.0, samples: int = 4096) -> PlaneCurve:
    t = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    return PlaneCurve(
        np.column_stack([a * np.cos(t), b * np.sin(t)]),
        source=f"ellipse({a},{b})",
    )


def lipschitz_perturbed_circle(seed: int = 0, amplitude: float = 0.05, samples: int = 4096) -> PlaneCurve:
    """Unit circle with a smooth low-frequency radial perturbation; stays
    locally 1-Lipschitz for small amplitudes."""
    rng = np.random.default_rng(seed)
    t = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    r = np.ones_like(t)
    for m in range(2, 7):
        cm, sm = rng.uniform(-1, 1, size=2)
        r += amplitude * (cm * np.cos(m * t) + sm * np.sin(m * t)) / m
    return PlaneCurve(
        np.column_stack([r * np.cos(t), r * np.sin(t)]),
        source=f"lipschitz_perturbed_circle({seed},{amplitude})",
    )


# -- simplicity ------------------------------------------------------------

_BRUTE_PAIR_CHUNK = 200_000


def _candidate_pairs_bucketed(closed: np.ndarray, n: int):
    lo = np.minimum(closed[:-1], closed[1:])
    hi = np.maximum(closed[:-1], closed[1:])
    cell = float(np.max(hi - lo))
    cell = max(cell, 1e-12)
    keys = []
    segs = []
    for corner in (lo, hi, np.column_stack([lo[:, 0], hi[:, 1]]), np.column_stack([hi[:, 0], lo[:, 1]])):
        cx = np.floor(corner[:, 0] / cell).astype(np.int64)
        cy = np.floor(corner[:, 1] / cell).astype(np.int64)
        keys.append(cx * np.int64(0x9E3779B1) + cy)
        segs.append(np.arange(n, dtype=np.int64))
    key = np.concatenate(keys)
    seg = np.concatenate(segs)
    # Unique (cell, segment) incidences, grouped by cell.
    inc = np.unique(key * np.int64(n + 1) + seg)
    key_s, seg_s = inc // (n + 1), inc % (n + 1)
    order = np.argsort(key_s, kind="stable")
    key_s, seg_s = key_s[order], seg_s[order]
    boundaries = np.flatnonzero(np.diff(key_s)) + 1
    starts = np.concatenate([[0], boundaries])
    ends = np.concatenate([boundaries, [key_s.size]])
    ia_parts, ib_parts = [], []
    for s0, s1 in zip(starts, ends):
        if s1 - s0 < 2:
            continue
        grp = np.sort(seg_s[s0:s1])
        gi, gj = np.triu_indices(grp.size, k=1)
        ia_parts.append(grp[gi])
        ib_parts.append(grp[gj])
    if not ia_parts:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    ia = np.concatenate(ia_parts)
    ib = np.concatenate(ib_parts)
    packed = np.unique(ia * np.int64(n) + ib)
    ia, ib = packed // n, packed % n
    nonadj = (ib - ia != 1) & ~((ia == 0) & (ib == n - 1))
    return ia[nonadj], ib[nonadj]


def is_simple(curve: PlaneCurve) -> bool:
    """True iff no two non-adjacent segments meet and no adjacent segments
    overlap beyond their shared endpoint."""
    closed = curve.closed_points
    n = len(curve)
    # Adjacent overlap: a zero turn with direction reversal.
    d = closed[1:] - closed[:-1]
    d_next = np.vstack([d[1:], d[:1]])
    turn = d[:, 0] * d_next[:, 1] - d[:, 1] * d_next[:, 0]
    reversed_dir = np.einsum("ij,ij->i", d, d_next) < 0
    if np.any((turn == 0.0) & reversed_dir):
        return False
    ia, ib = _candidate_pairs_bucketed(closed, n)
    if ia.size > 20_000_000:
        # Degenerate bucketing; brute-force in chunks instead.
        for start in range(0, n):
            js = np.arange(start + 2, n if start > 0 else n - 1, dtype=np.int64)
            if js.size and _kernels.first_crossing(closed, np.full(js.size, start, np.int64), js) >= 0:
                return False
        return True
    for start in range(0, ia.size, _BRUTE_PAIR_CHUNK):
        sl = slice(start, start + _BRUTE_PAIR_CHUNK)
        if _kernels.first_crossing(closed, np.ascontiguousarray(ia[sl]), np.ascontiguousarray(ib[sl])) >= 0:
            return False
    return True


# -- Lipschitz windows -----------------------------------------------------


@dataclass(frozen=True)
class LipschitzChart:
    """A rotated window in which the curve is the graph of a 1-Lipschitz
    function: samples are (t, g(t)) pairs in the rotated frame centered at
    `center`."""

    center: Point2
    rotation: float
    half_width: float
    samples: np.ndarray  # (m, 2), sorted by t

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.float64)
        if s.ndim != 2 or s.shape[1] != 2 or s.shape[0] < 2:
            raise ValueError("samples must be an (m, 2) array with m >= 2")
        if np.any(np.diff(s[:, 0]) < 0):
            raise ValueError("samples must be sorted by t")
        dt = np.diff(s[:, 0])
        dg = np.abs(np.diff(s[:, 1]))
        if np.any(dg > dt * (1 + 1e-9) + 1e-12):
            raise ValueError("samples violate the 1-Lipschitz bound")
        object.__setattr__(self, "samples", s)

    @staticmethod
    def from_function(g, half_width: float, m: int = 257, center: Point2 = (0.0, 0.0), rotation: float = 0.0):
        t = np.linspace(-1.5 * half_width, 1.5 * half_width, m)
        return LipschitzChart(center, rotation, half_width, np.column_stack([t, [g(x) for x in t]]))

    def g(self, t: float) -> float:
        ts = self.samples[:, 0]
        if t < ts[0] or t > ts[-1]:
            raise OutOfChartError(f"t={t} outside chart samples")
        return float(np.interp(t, ts, self.samples[:, 1]))


def eta_offset(chart: LipschitzChart, t: float, r: float, tol: float = 1e-10) -> float:
    """The unique eta in [0, r/2] with |(t+eta, g(t+eta)) - (t-eta, g(t-eta))| = r.

    The squared chord length is strictly increasing in eta for a 1-Lipschitz
    graph, so bisection brackets the root; accurate to tol in chord length.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    if r == 0:
        return 0.0

    def chord(eta: float) -> float:
        return math.hypot(2 * eta, chart.g(t + eta) - chart.g(t - eta))

    lo, hi = 0.0, r / 2
    chord(hi)  # raises OutOfChartError early if the bracket leaves the chart
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if chord(mid) < r:
            lo = mid
        else:
            hi = mid
        if abs(chord(0.5 * (lo + hi)) - r) < tol:
            break
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class VertexChartReport:
    index: int
    certified: bool
    rotation: float | None
    reason: str | None = None


@dataclass(frozen=True)
class LipschitzCertificate:
    certified: bool
    epsilon: float
    reports: tuple[VertexChartReport, ...]

    def failures(self):
        return [r for r in self.reports if not r.certified]


def _window_check(curve: PlaneCurve, i: int, epsilon: float, theta: float, nearby: np.ndarray):
    """Try one rotated epsilon-window at vertex i; returns (ok, reason)."""
    n = len(curve)
    center = curve.vertices[i]
    c, s = math.cos(theta), math.sin(theta)
    rel = curve.vertices[nearby] - center
    u = rel[:, 0] * c + rel[:, 1] * s
    v = -rel[:, 0] * s + rel[:, 1] * c
    inside = (np.abs(u) < epsilon) & (np.abs(v) < epsilon)
    idx_in = np.sort(nearby[inside])
    if idx_in.size == 0:
        return False, "window contains no samples"
    if idx_in.size == n:
        return False, "window contains the whole curve"
    # Contiguity: the window indices must form a single run mod n.
    gaps = np.flatnonzero(np.diff(idx_in) > 1)
    wrap_gap = (idx_in[0] + n - idx_in[-1]) > 1
    if gaps.size + int(wrap_gap) != 1:
        return False, "window contains non-contiguous curve arcs"
    if wrap_gap:
        first, last = int(idx_in[0]), int(idx_in[-1])
    else:
        g = int(gaps[0])
        first, last = int(idx_in[g + 1]), int(idx_in[g])
    pts = [(float(a), float(b)) for a, b in zip(u[inside], v[inside])]

    def clip(inside_idx: int, outside_idx: int):
        p = curve.vertices[inside_idx] - center
        q = curve.vertices[outside_idx] - center
        pu, pv = p[0] * c + p[1] * s, -p[0] * s + p[1] * c
        qu, qv = q[0] * c + q[1] * s, -q[0] * s + q[1] * c
        best = None
        for lim, pa, qa, pb, qb, side in (
            (epsilon, pu, qu, pv, qv, "u"),
            (-epsilon, pu, qu, pv, qv, "u"),
            (epsilon, pv, qv, pu, qu, "v"),
            (-epsilon, pv, qv, pu, qu, "v"),
        ):
            if (pa - lim) * (qa - lim) < 0:
                w = (lim - pa) / (qa - pa)
                if best is None or w < best[0]:
                    other = pb + w * (qb - pb)
                    best = (w, side, lim, other)
        return best

    sides = []
    for inside_idx, outside_idx in (((first, (first - 1) % n)), ((last, (last + 1) % n))):
        hit = clip(inside_idx, outside_idx)
        if hit is None:
            return False, "curve terminates inside the window"
        w, side, lim, other = hit
        if side != "u" or abs(other) >= epsilon:
            return False, "arc exits through a horizontal edge (not a graph over the window)"
        sides.append(math.copysign(1.0, lim))
        pts.append((lim, other))
    if sides[0] == sides[1]:
        return False, "arc enters and exits through the same side"
    pts.sort()
    arr = np.array(pts)
    du = np.diff(arr[:, 0])
    dv = np.abs(np.diff(arr[:, 1]))
    if np.any(dv > du + 1e-12):
        return False, "sampled slopes exceed 1"
    return True, None


def lipschitz_certificate(curve: PlaneCurve, epsilon: float, angle_grid: int = 64) -> LipschitzCertificate:
    """Search, at every vertex, for a rotated epsilon-window making the curve
    a 1-Lipschitz graph; rotations are tried on a grid anchored at the local
    tangent estimate (so the verdict is rotation-equivariant).

    A failed vertex means "not certified by this grid", never a disproof.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if epsilon >= curve.diameter():
        raise ValueError("epsilon must be smaller than the curve diameter")
    n = len(curve)
    tree = cKDTree(curve.vertices)
    radius = epsilon * math.sqrt(2.0) * 1.0001
    tangents = np.roll(curve.vertices, -1, axis=0) - np.roll(curve.vertices, 1, axis=0)
    reports = []
    for i in range(n):
        nearby = np.array(sorted(tree.query_ball_point(curve.vertices[i], radius)), dtype=np.int64)
        base = math.atan2(tangents[i][1], tangents[i][0])
        ok, reason, rot = False, None, None
        for k in range(angle_grid):
            theta = base + k * math.pi / angle_grid
            ok, reason = _window_check(curve, i, epsilon, theta, nearby)
            if ok:
                rot = theta % math.pi
                break
        reports.append(VertexChartReport(index=i, certified=ok, rotation=rot, reason=None if ok else reason))
    return LipschitzCertificate(
        certified=all(r.certified for r in reports),
        epsilon=epsilon,
        reports=tuple(reports),
    )


def chart_at(curve: PlaneCurve, i: int, epsilon: float, rotation: float) -> LipschitzChart:
    """Build the LipschitzChart for a certified vertex/rotation pair."""
    n = len(curve)
    center = curve.vertices[i]
    c, s = math.cos(rotation), math.sin(rotation)
    rel = curve.vertices - center
    u = rel[:, 0] * c + rel[:, 1] * s
    v = -rel[:, 0] * s + rel[:, 1] * c
    inside = (np.abs(u) < epsilon) & (np.abs(v) < epsilon)
    order = np.argsort(u[inside])
    samples = np.column_stack([u[inside][order], v[inside][order]])
    return LipschitzChart(center=tuple(center), rotation=rotation, half_width=epsilon, samples=samples)


# -- fixed-length chord cycle ----------------------------------------------


@dataclass(frozen=True, order=True)
class ChordPair:
    """Unordered pair of arc-length parameters, stored with s <= t."""

    s: float
    t: float

    def __post_init__(self):
        if self.s > self.t:
            lo, hi = self.t, self.s
            object.__setattr__(self, "s", lo)
            object.__setattr__(self, "t", hi)

    @staticmethod
    def of(a: float, b: float) -> "ChordPair":
        a, b = a % 1.0, b % 1.0
        return ChordPair(min(a, b), max(a, b))


def _chord_cycle_raw(curve: PlaneCurve, r: float):
    """(s_params, t_params) of the chord cycle: t(s) is the parameter of the
    unique point at distance r reached first when traversing backwards."""
    if r <= 0:
        raise ValueError("r must be positive")
    if r >= curve.diameter():
        raise EmptyCycleError(f"r={r} is not smaller than the curve diameter")
    try:
        seg, u = _kernels.chord_walk(curve.closed_points, float(r))
    except ValueError as exc:
        raise EmptyCycleError(str(exc)) from None
    cum, total = curve.cumulative_lengths, curve.perimeter
    t_params = (cum[seg] + u * curve._seglen[seg]) / total
    return curve.vertex_params(), t_params % 1.0


def chord_pairs_at_distance(curve: PlaneCurve, r: float) -> list[ChordPair]:
    """The closed cycle of parameter pairs at chord distance exactly r, one
    per traversal step (vertex)."""
    s_params, t_params = _chord_cycle_raw(curve, r)
    return [ChordPair.of(s, t) for s, t in zip(s_params, t_params)]


def midpoint_curve(curve: PlaneCurve, r: float) -> PlaneCurve:
    """Polyline of midpoints of the fixed-length chord cycle.  On certified
    curves at small r this is again a simple closed curve."""
    s_params, t_params = _chord_cycle_raw(curve, r)
    mids = 0.5 * (curve.point_at(s_params) + curve.point_at(t_params))
    keep = np.any(mids != np.roll(mids, 1, axis=0), axis=1)
    mids = mids[keep]
    if mids.shape[0] < MIN_VERTICES:
        raise EmptyCycleError("midpoint cycle degenerates to fewer than 8 distinct points")
    return PlaneCurve(mids, source=f"midpoints({curve.source}, r={r})")


def chord_map_degree(curve: PlaneCurve, r: float, power: int = 1) -> int:
    """Winding number around 0 of s -> (alpha(s) - alpha(t(s)))^power along
    the chord cycle.  Tracked continuously: the per-step angle increment must
    stay well below pi/power, otherwise the sampling cannot resolve the
    winding and a ResolutionError asks for refinement."""
    if power < 1:
        raise ValueError("power must be >= 1")
    s_params, t_params = _chord_cycle_raw(curve, r)
    vec = curve.point_at(s_params) - curve.point_at(t_params)
    norms = np.hypot(vec[:, 0], vec[:, 1])
    if np.any(norms < 1e-12):
        raise ResolutionError("chord vector passes through numerical zero; refine sampling")
    ang = np.arctan2(vec[:, 1], vec[:, 0])
    step = np.diff(np.concatenate([ang, ang[:1]]))
    step = (step + np.pi) % (2 * np.pi) - np.pi
    if np.max(np.abs(step)) * power >= 0.9 * np.pi:
        raise ResolutionError("angle step too large to track the winding; refine sampling")
    total = float(np.sum(step))
    base = round(total / (2 * np.pi))
    if abs(total - 2 * np.pi * base) > 1e-6:
        raise ResolutionError("winding did not close up to tolerance; refine sampling")
    return power * int(base)
