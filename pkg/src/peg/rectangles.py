"""Inscribed-rectangle search by collision detection.

An unordered pair {s, t} of curve parameters maps to
(midpoint, (alpha(s) - alpha(t))^(2n)); two distinct pairs with the same
image are the diagonals of an inscribed rectangle whose diagonals cross at
angle k*pi/n, i.e. aspect ratio tan(k*pi/2n).  The search hashes a uniform
parameter grid into spatial buckets (internally in a rescaled chord-power
embedding with uniform metric), refines near-collisions by coordinate
descent, and validates every hit before reporting it.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .curves import ChordPair, PlaneCurve, Point2

log = logging.getLogger(__name__)


def aspect_ratio(n: int, k: int) -> float:
    """tan(k*pi / 2n), the aspect ratio certified by an order-n collision."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must satisfy 1 <= k <= n-1, got k={k}")
    return math.tan(k * math.pi / (2 * n))


@dataclass(frozen=True)
class PsiPoint:
    """Image of a chord pair: midpoint and the 2n-th complex power of the
    chord vector (as a planar point)."""

    mid: Point2
    pow: Point2
    source: ChordPair
    n: int


def psi(curve: PlaneCurve, pair: ChordPair, n: int) -> PsiPoint:
    if n < 1:
        raise ValueError("n must be >= 1")
    a = curve.point_at(pair.s)
    b = curve.point_at(pair.t)
    mid = 0.5 * (a + b)
    d = complex(a[0] - b[0], a[1] - b[1])
    w = d ** (2 * n)
    return PsiPoint(mid=(float(mid[0]), float(mid[1])), pow=(w.real, w.imag), source=pair, n=n)


@dataclass(frozen=True)
class SearchConfig:
    grid: int = 1024
    tolerance: float = 1e-7
    dedup_radius: float = 1e-4
    max_hits: int = 8
    bucket_edge: float | None = None  # default: 2 * expected image spacing
    min_separation: float | None = None  # parameter-space guard, default 4/grid
    max_candidates: int = 512
    max_refine_iter: int = 400


@dataclass(frozen=True)
class RectangleHit:
    """A verified near-collision: four corners on the curve forming a
    rectangle with defect below the residual."""

    vertices: tuple[Point2, Point2, Point2, Point2]
    n: int
    k: int
    aspect: float
    diameter: float
    residual: float
    pairs: tuple[ChordPair, ChordPair]

    def to_json(self):
        return {
            "n": self.n,
            "k": self.k,
            "aspect": self.aspect,
            "diameter": self.diameter,
            "residual": self.residual,
            "vertices": [list(v) for v in self.vertices],
            "pairs": [[p.s, p.t] for p in self.pairs],
        }


@dataclass(frozen=True)
class RectangleCheck:
    """Independent recomputation of a hit's defining properties."""

    corner_distances: tuple[float, float, float, float]
    midpoint_gap: float
    diagonal_gap: float
    power_gap: float
    angle_error: float
    aspect_error: float

    def max_residual(self) -> float:
        return max(
            max(self.corner_distances),
            self.midpoint_gap,
            self.diagonal_gap,
            self.angle_error,
            self.aspect_error,
        )


def _mobius_separation(a: tuple[float, float], b: tuple[float, float]) -> float:
    def circ(x, y):
        d = abs(x - y) % 1.0
        return min(d, 1.0 - d)

    direct = max(circ(a[0], b[0]), circ(a[1], b[1]))
    swapped = max(circ(a[0], b[1]), circ(a[1], b[0]))
    return min(direct, swapped)


def _embed_pairs(za: np.ndarray, zb: np.ndarray, n: int) -> np.ndarray:
    """Rescaled collision embedding (mid, |d| e^{i 2n arg d}) of point pairs.

    Radially rescaling the chord power preserves collisions exactly while
    keeping the metric uniform, which makes one bucket edge work globally.
    """
    mid = 0.5 * (za + zb)
    d = za - zb
    mod = np.abs(d)
    unit = np.where(mod > 0, d / np.where(mod > 0, mod, 1.0), 1.0)
    w = mod * unit ** (2 * n)
    out = np.empty((za.size, 4), dtype=np.float64)
    out[:, 0] = mid.real
    out[:, 1] = mid.imag
    out[:, 2] = w.real
    out[:, 3] = w.imag
    return out


def _bucket_candidates(vals: np.ndarray, edge: float):
    """Near-collision candidate pairs via hashed buckets on 16 half-shifted
    grids.  Within a bucket, rows adjacent in index order are paired (the
    stable sort keeps index order), which seeds every bucket that mixes two
    sheets of the image surface without materialising all in-bucket pairs."""
    n_rows = vals.shape[0]
    packed_all = []
    scaled = vals / edge
    for shift_bits in range(16):
        shifted = scaled + np.array([(shift_bits >> b) & 1 for b in range(4)], dtype=np.float64) * 0.5
        cells = np.floor(shifted).astype(np.int64)
        key = cells[:, 0]
        for c in range(1, 4):
            key = key * np.int64(0x100000001B3) + cells[:, c]
        order = np.argsort(key, kind="stable").astype(np.int64)
        ks = key[order]
        same = ks[:-1] == ks[1:]
        if np.any(same):
            packed_all.append(order[:-1][same] * n_rows + order[1:][same])
    if not packed_all:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    packed = np.unique(np.concatenate(packed_all))
    return packed // n_rows, packed % n_rows


def find_rectangles(
    curve: PlaneCurve,
    n: int,
    min_diameter: float = 0.0,
    cfg: SearchConfig = SearchConfig(),
) -> list[RectangleHit]:
    """Inscribed rectangles of aspect ratio tan(k*pi/2n), 1 <= k <= n-1.

    Every returned hit is a refined near-collision with residual below
    cfg.tolerance; candidates that fail to refine are dropped with a log
    message, never reported.  On symmetric curves the hit family is
    deduplicated down to cfg.max_hits representatives per k.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if min_diameter < 0:
        raise ValueError("min_diameter must be >= 0")

    G = cfg.grid
    min_sep = cfg.min_separation if cfg.min_separation is not None else 4.0 / G
    params = (np.arange(G, dtype=np.float64) + 0.5) / G
    points = curve.point_at(params)
    z = points[:, 0] + 1j * points[:, 1]
    iu, ju = np.triu_indices(G, k=1)
    # Drop the degenerate band of near-zero chords: no valid hit can involve
    # a pair closer than the separation guard.
    gap = np.minimum(ju - iu, G - (ju - iu))
    band = gap >= max(1, math.ceil(min_sep * G))
    iu, ju = iu[band], ju[band]
    vals = _embed_pairs(z[iu], z[ju], n)

    # Expected image spacing, measured: the image displacement caused by one
    # grid step in s, on a subsample of pairs.
    stride = max(1, iu.size // 20000)
    samp = slice(None, None, stride)
    step = np.max(
        np.abs(vals[samp] - _embed_pairs(z[(iu[samp] + 1) % G], z[ju[samp]], n)), axis=1
    )
    spacing = float(np.quantile(step, 0.99))
    edge = cfg.bucket_edge if cfg.bucket_edge is not None else 2.0 * spacing

    ca, cb = _bucket_candidates(vals, edge)
    if ca.size == 0:
        return []

    # Parameter-space separation: discard shifted copies of the same pair.
    sa, ta = params[iu[ca]], params[ju[ca]]
    sb, tb = params[iu[cb]], params[ju[cb]]

    def circ(x, y):
        d = np.abs(x - y) % 1.0
        return np.minimum(d, 1.0 - d)

    direct = np.maximum(circ(sa, sb), circ(ta, tb))
    swapped = np.maximum(circ(sa, tb), circ(ta, sb))
    sep = np.minimum(direct, swapped)
    keep = sep >= min_sep
    ca, cb = ca[keep], cb[keep]
    if ca.size == 0:
        return []

    # Cluster candidates that seed the same collision (quantized parameter
    # quadruple), keeping the lowest-residual representative of each cluster,
    # so a dense family cannot starve isolated collisions of refinement slots.
    resid0 = np.max(np.abs(vals[ca] - vals[cb]), axis=1)
    cell = max(min_sep, 4.0 / G)
    quad = np.stack([params[iu[ca]], params[ju[ca]], params[iu[cb]], params[ju[cb]]])
    qcell = np.round(quad / cell).astype(np.int64)
    key = qcell[0]
    for c in range(1, 4):
        key = (key << 16) + qcell[c]
    order = np.lexsort((resid0, key))
    first = np.concatenate([[True], np.diff(key[order]) != 0])
    reps = order[first]
    # Budget refinement slots per coarse diagonal angle so that collision
    # families with small residuals cannot crowd out other k values.
    d1 = z[iu[ca[reps]]] - z[ju[ca[reps]]]
    d2 = z[iu[cb[reps]]] - z[ju[cb[reps]]]
    theta = np.abs(np.angle(d1 / d2))
    theta = np.minimum(theta, np.pi - theta)
    kpre = np.clip(np.round(theta * n / np.pi).astype(np.int64), 0, n // 2)
    chosen = []
    for kv in np.unique(kpre):
        grp = reps[kpre == kv]
        grp = grp[np.argsort(resid0[grp], kind="stable")[: cfg.max_candidates]]
        chosen.append(grp)
    reps = np.concatenate(chosen)
    ca, cb = ca[reps], cb[reps]

    pts = curve.closed_points
    cum = curve.cumulative_lengths
    hits: list[RectangleHit] = []
    dropped = 0
    for a_idx, b_idx in zip(ca, cb):
        q0 = np.array(
            [params[iu[a_idx]], params[ju[a_idx]], params[iu[b_idx]], params[ju[b_idx]]],
            dtype=np.float64,
        )
        q, res = _kernels.refine_collision(
            pts, cum, curve.perimeter, q0, 2 * n, 1.0 / G, 1e-13, cfg.max_refine_iter
        )
        if res >= cfg.tolerance:
            dropped += 1
            continue
        hit = _hit_from_params(curve, n, q, res, min_sep)
        if hit is None:
            dropped += 1
            continue
        if hit.diameter < min_diameter:
            continue
        hits.append(hit)
    if dropped:
        log.info("find_rectangles(n=%d): dropped %d unrefinable candidates", n, dropped)

    return _dedup(hits, cfg.dedup_radius, cfg.max_hits)


def _hit_from_params(curve, n, q, res, min_sep) -> RectangleHit | None:
    s, t, s2, t2 = (float(x) % 1.0 for x in q)
    if _mobius_separation((s, t), (s2, t2)) < min_sep:
        return None
    a, b = curve.point_at(s), curve.point_at(t)
    c, d = curve.point_at(s2), curve.point_at(t2)
    d1 = a - b
    d2 = c - d
    len1, len2 = float(np.hypot(*d1)), float(np.hypot(*d2))
    if min(len1, len2) <= 0:
        return None
    theta = abs(math.atan2(d1[0] * d2[1] - d1[1] * d2[0], d1 @ d2))
    theta = min(theta, math.pi - theta)  # angle between diagonal lines
    k = round(theta * n / math.pi)
    if not 1 <= k <= n // 2 or abs(theta - k * math.pi / n) > 0.25 * math.pi / n:
        return None
    mid_gap = float(np.hypot(*(0.5 * (a + b) - 0.5 * (c + d))))
    corners = np.array([a, c, b, d])
    center = corners.mean(axis=0)
    ang = np.arctan2(corners[:, 1] - center[1], corners[:, 0] - center[0])
    cyc = corners[np.argsort(ang)]
    side1 = float(np.hypot(*(cyc[1] - cyc[0])))
    side2 = float(np.hypot(*(cyc[2] - cyc[1])))
    if min(side1, side2) == 0:
        return None
    aspect = min(side1, side2) / max(side1, side2)
    return RectangleHit(
        vertices=tuple((float(x), float(y)) for x, y in cyc),
        n=n,
        k=k,
        aspect=aspect,
        diameter=max(len1, len2),
        residual=max(res, mid_gap, abs(len1 - len2) / 2),
        pairs=(ChordPair.of(s, t), ChordPair.of(s2, t2)),
    )


def _vertex_distance(h1: RectangleHit, h2: RectangleHit) -> float:
    v1 = np.array(h1.vertices)
    v2 = np.array(h2.vertices)
    best = math.inf
    for shift in range(4):
        for flip in (False, True):
            w = np.roll(v2[::-1] if flip else v2, shift, axis=0)
            best = min(best, float(np.max(np.hypot(*(v1 - w).T))))
    return best


def _dedup(hits: list[RectangleHit], radius: float, max_hits: int) -> list[RectangleHit]:
    hits = sorted(hits, key=lambda h: (h.k, h.residual, -h.diameter, h.vertices))
    kept: list[RectangleHit] = []
    per_k: dict[int, int] = {}
    for h in hits:
        if per_k.get(h.k, 0) >= max_hits:
            continue
        if any(k.k == h.k and _vertex_distance(h, k) < radius for k in kept):
            continue
        kept.append(h)
        per_k[h.k] = per_k.get(h.k, 0) + 1
    return sorted(kept, key=lambda h: (h.k, -h.diameter, h.residual, h.vertices))


def _point_to_polyline(curve: PlaneCurve, p: np.ndarray) -> float:
    a = curve.closed_points[:-1]
    b = curve.closed_points[1:]
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    t = np.clip(np.einsum("ij,ij->i", p - a, ab) / denom, 0.0, 1.0)
    proj = a + t[:, None] * ab
    return float(np.min(np.hypot(*(p - proj).T)))


def verify_rectangle(hit: RectangleHit, curve: PlaneCurve) -> RectangleCheck:
    """Re-check a hit from scratch: corner-on-curve distances, midpoint
    coincidence, diagonal equality, raw chord-power gap, diagonal angle vs
    k*pi/n and measured aspect vs tan(k*pi/2n)."""
    corners = [np.asarray(v, dtype=np.float64) for v in hit.vertices]
    corner_d = tuple(_point_to_polyline(curve, c) for c in corners)
    # Cyclic vertex order: diagonals are (0, 2) and (1, 3).
    m1 = 0.5 * (corners[0] + corners[2])
    m2 = 0.5 * (corners[1] + corners[3])
    d1 = corners[0] - corners[2]
    d2 = corners[1] - corners[3]
    len1, len2 = float(np.hypot(*d1)), float(np.hypot(*d2))
    w1 = complex(*d1) ** (2 * hit.n)
    w2 = complex(*d2) ** (2 * hit.n)
    theta = abs(math.atan2(d1[0] * d2[1] - d1[1] * d2[0], float(d1 @ d2)))
    theta = min(theta, math.pi - theta)
    angle_err = abs(theta - hit.k * math.pi / hit.n)
    aspect_err = abs(hit.aspect - math.tan(hit.k * math.pi / (2 * hit.n)))
    return RectangleCheck(
        corner_distances=corner_d,
        midpoint_gap=float(np.hypot(*(m1 - m2))),
        diagonal_gap=abs(len1 - len2),
        power_gap=abs(w1 - w2),
        angle_error=angle_err,
        aspect_error=aspect_err,
    )


@dataclass(frozen=True)
class SweepRow:
    n: int
    k: int
    aspect: float
    diameter: float
    residual: float

    def as_tuple(self):
        return (self.n, self.k, self.aspect, self.diameter, self.residual)


def sweep(curve: PlaneCurve, n_values, cfg: SearchConfig = SearchConfig(), workers: int = 1):
    """Run find_rectangles for each n and tabulate (n, k, aspect, diameter,
    residual) rows, canonically sorted regardless of worker count."""
    n_values = list(n_values)
    if not n_values:
        return []
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            all_hits = list(pool.map(lambda n: find_rectangles(curve, n, cfg=cfg), n_values))
    else:
        all_hits = [find_rectangles(curve, n, cfg=cfg) for n in n_values]
    rows = [
        SweepRow(n=h.n, k=h.k, aspect=h.aspect, diameter=h.diameter, residual=h.residual)
        for hits in all_hits
        for h in hits
    ]
    return sorted(rows, key=lambda r: r.as_tuple())
