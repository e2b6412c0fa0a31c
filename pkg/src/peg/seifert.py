"""Seifert-form certificates bounding the non-orientable locally-flat 4-genus
of T(2n-1, 2n).

The twisted checkerboard surface of T(2n-1, 2n) carries the Seifert form
M_k = M_0 + 4k*J on an (n-1)-dimensional lattice (diagonal and superdiagonal
4k-1, all other entries 4k).  A pair of classes a, b with a M a = 0 and
{a M b, b M a} = {0, +-1} spans a trivial-Alexander once-punctured torus,
which can be excised topologically: the smooth genus n-1 drops to n-2.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .exactmat import IntMatrix
from .linking import my_check, torus_sigma_matrix, form_from_presentation
from .numtheory import is_prime
from .report import ObstructionReport, Verdict


@dataclass(frozen=True)
class SeifertMatrix:
    n: int
    k: int
    entries: IntMatrix

    def size(self) -> int:
        return self.n - 1


@dataclass(frozen=True)
class PairCertificate:
    """Integer classes a, b with the four Seifert products pinned exactly.

    Valid when a M a = 0 and the two cross products are {0, +1} or {0, -1};
    the induced 2x2 matrix then has determinant polynomial t, i.e. trivial
    Alexander polynomial.
    """

    a: tuple[int, ...]
    b: tuple[int, ...]
    products: tuple[int, int, int, int]  # aMa, aMb, bMa, bMb

    def induced_2x2(self) -> IntMatrix:
        ama, amb, bma, bmb = self.products
        return IntMatrix([[ama, amb], [bma, bmb]])

    def is_valid(self) -> bool:
        ama, amb, bma, bmb = self.products
        if ama != 0:
            return False
        cross = sorted((abs(amb), abs(bma)))
        return cross == [0, 1] and alexander_one_2x2(self.induced_2x2())


def build_Mk(n: int, k: int) -> SeifertMatrix:
    """The (n-1) x (n-1) Seifert matrix with diagonal and superdiagonal 4k-1
    and every other entry 4k."""
    if n < 3:
        raise ValueError("n must be >= 3")
    if k < 0:
        raise ValueError("k must be >= 0")
    size = n - 1
    m = [[4 * k] * size for _ in range(size)]
    for i in range(size):
        m[i][i] = 4 * k - 1
        if i + 1 < size:
            m[i][i + 1] = 4 * k - 1
    return SeifertMatrix(n=n, k=k, entries=IntMatrix(m))


def alexander_one_2x2(a_mat: IntMatrix) -> bool:
    """True iff det(t*A - A^T) == t, i.e. the half-power determinant
    det(t^(1/2) A - t^(-1/2) A^T) is identically 1."""
    if a_mat.rows != 2 or a_mat.cols != 2:
        raise ValueError("expected a 2x2 matrix")
    (a, b), (c, d) = a_mat.data
    # det(tA - A^T) = (ad-bc) t^2 + (b^2 + c^2 - 2ad) t + (ad-bc)
    return a * d - b * c == 0 and b * b + c * c - 2 * a * d == 1


def _symmetrized_definite(m: IntMatrix) -> bool:
    """Whether x^T M x is (positive or negative) definite, by exact leading
    principal minors of the symmetrization."""
    n = m.rows
    s = IntMatrix([[m.data[i][j] + m.data[j][i] for j in range(n)] for i in range(n)])
    minors = []
    for k in range(1, n + 1):
        sub = IntMatrix([row[:k] for row in s.data[:k]])
        minors.append(sub.det())
    if all(d > 0 for d in minors):
        return True
    return all((d > 0 if i % 2 else d < 0) for i, d in enumerate(minors))


def find_pair(m: SeifertMatrix, coord_bound: int = 6) -> PairCertificate | None:
    """Exhaustive certificate search over coordinates in [-coord_bound, bound].

    Outer loop over isotropic a (a M a = 0), inner scan for b realising the
    cross-product pattern; lexicographic order, first hit wins.  A definite
    form has no nonzero isotropic a, so the search is skipped outright.
    None means no certificate in the box, not a proof of nonexistence.
    """
    if coord_bound < 1:
        raise ValueError("coord_bound must be >= 1")
    mat = m.entries
    dim = m.size()
    if _symmetrized_definite(mat):
        return None

    rng = range(-coord_bound, coord_bound + 1)
    box = np.array(list(product(rng, repeat=dim)), dtype=np.int64)
    m_np = np.array(mat.data, dtype=np.int64)

    for a in product(rng, repeat=dim):
        if not any(a):
            continue
        ma = mat.mul_vec(list(a))
        if sum(x * y for x, y in zip(a, ma)) != 0:
            continue
        u = np.array(mat.transpose().mul_vec(list(a)), dtype=np.int64)  # a^T M b = u . b
        w = np.array(ma, dtype=np.int64)  # b^T M a = w . b
        ub = box @ u
        wb = box @ w
        mask = ((ub == 0) & (np.abs(wb) == 1)) | ((np.abs(ub) == 1) & (wb == 0))
        idx = np.flatnonzero(mask)
        if idx.size == 0:
            continue
        b_vec = box[idx[0]]
        b = tuple(int(x) for x in b_vec)
        bmb = int(b_vec @ m_np @ b_vec)
        cert = PairCertificate(
            a=tuple(a),
            b=b,
            products=(0, int(ub[idx[0]]), int(wb[idx[0]]), bmb),
        )
        assert cert.is_valid()
        return cert
    return None


def extend_certificate(cert: PairCertificate, m: SeifertMatrix) -> PairCertificate:
    """Zero-pad a certificate for a top-left submatrix up to m's size and
    recompute the products exactly."""
    dim = m.size()
    if len(cert.a) > dim:
        raise ValueError("certificate larger than target matrix")
    a = list(cert.a) + [0] * (dim - len(cert.a))
    b = list(cert.b) + [0] * (dim - len(cert.b))
    mat = m.entries
    ma, mb = mat.mul_vec(a), mat.mul_vec(b)
    dot = lambda u, v: sum(x * y for x, y in zip(u, v))
    return PairCertificate(
        a=tuple(a),
        b=tuple(b),
        products=(dot(a, ma), dot(a, mb), dot(b, ma), dot(b, mb)),
    )


@dataclass
class GenusBounds:
    """Smooth vs locally-flat non-orientable 4-genus bounds for T(2n-1, 2n)."""

    n: int
    status: str  # "ok" or "PreconditionFailed"
    smooth: int | None = None
    top_upper: int | None = None
    top_lower: int | None = None
    certificate: PairCertificate | None = None
    lower_bound_report: ObstructionReport | None = None

    def to_json(self):
        out = {
            "knot": f"T({2 * self.n - 1},{2 * self.n})",
            "status": self.status,
            "smooth_gamma4": self.smooth,
            "topological_upper_bound": self.top_upper,
            "topological_lower_bound": self.top_lower,
        }
        if self.certificate is not None:
            out["certificate"] = {
                "a": list(self.certificate.a),
                "b": list(self.certificate.b),
                "products": list(self.certificate.products),
            }
        if self.lower_bound_report is not None:
            out["lower_bound_evidence"] = self.lower_bound_report.to_json()
        return out


_BASE_CERT = None


def _base_certificate() -> PairCertificate:
    global _BASE_CERT
    if _BASE_CERT is None:
        _BASE_CERT = find_pair(build_Mk(5, 1), coord_bound=6)
        assert _BASE_CERT is not None
    return _BASE_CERT


def gamma4_bounds(n: int) -> GenusBounds:
    """Bounds for T(2n-1, 2n), n >= 5: smooth genus n-1 (Batson), locally-flat
    upper bound n-2 via the excision certificate, and lower bound 2 whenever
    2n-1 is a prime congruent to 5 mod 8 (linking-form obstruction)."""
    if n < 5:
        return GenusBounds(n=n, status=Verdict.PRECONDITION_FAILED.value)
    cert = extend_certificate(_base_certificate(), build_Mk(n, 1))
    assert cert.is_valid()
    bounds = GenusBounds(
        n=n,
        status="ok",
        smooth=n - 1,
        top_upper=n - 2,
        certificate=cert,
    )
    p = 2 * n - 1
    if is_prime(p) and p % 8 == 5:
        form = form_from_presentation(torus_sigma_matrix(n, -1))
        rep = my_check(form, p)
        if rep.verdict is Verdict.OBSTRUCTED_TOPOLOGICAL:
            bounds.top_lower = 2
            bounds.lower_bound_report = rep
    return bounds
