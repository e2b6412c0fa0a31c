"""Exact integer matrix algebra: Smith normal form, determinants, inverses.

Matrices carry arbitrary-precision Python integers; nothing here touches
floating point.  Sizes stay small (at most a few hundred rows), so the
classical gcd-driven algorithms are plenty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class SingularMatrixError(ValueError):
    pass


class IntMatrix:
    """Rectangular matrix of exact integers, row-major."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: Iterable[Sequence[int]]):
        data = [list(r) for r in rows]
        if not data or not data[0]:
            raise ValueError("matrix must be non-empty")
        width = len(data[0])
        for r in data:
            if len(r) != width:
                raise ValueError("ragged rows")
            for x in r:
                if not isinstance(x, int):
                    raise TypeError(f"entries must be int, got {type(x).__name__}")
        self.data = data
        self.rows = len(data)
        self.cols = width

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.data == other.data

    def __repr__(self):
        return f"IntMatrix({self.data!r})"

    def copy(self) -> "IntMatrix":
        return IntMatrix(self.data)

    def transpose(self) -> "IntMatrix":
        return IntMatrix([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        bt = other.transpose().data
        return IntMatrix(
            [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in self.data]
        )

    def mul_vec(self, v: Sequence[int]) -> list[int]:
        if len(v) != self.cols:
            raise ValueError("shape mismatch")
        return [sum(x * y for x, y in zip(row, v)) for row in self.data]

    def minor(self, i: int, j: int) -> "IntMatrix":
        return IntMatrix(
            [
                [x for c, x in enumerate(row) if c != j]
                for r, row in enumerate(self.data)
                if r != i
            ]
        )

    def is_square(self) -> bool:
        return self.rows == self.cols

    def _band_shape(self) -> tuple[int, int]:
        lo = hi = 0
        for i, row in enumerate(self.data):
            for j, x in enumerate(row):
                if x != 0:
                    if i > j:
                        lo = max(lo, i - j)
                    else:
                        hi = max(hi, j - i)
        return lo, hi

    def det(self) -> int:
        """Exact determinant, with fast paths for triangular and tridiagonal
        shapes (the surgery presentations are banded); Bareiss otherwise."""
        if not self.is_square():
            raise ValueError("determinant needs a square matrix")
        if self.rows >= 3:
            lo, hi = self._band_shape()
            if lo == 0 or hi == 0:
                prod = 1
                for i in range(self.rows):
                    prod *= self.data[i][i]
                return prod
            if lo <= 1 and hi <= 1:
                return _tridiag_det(self)
        return _bareiss_det(self)


def _bareiss_det(m: IntMatrix) -> int:
    n = m.rows
    a = [row[:] for row in m.data]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _tridiag_det(m: IntMatrix) -> int:
    # Continuant recurrence: d_i = a_i d_{i-1} - b_{i-1} c_{i-1} d_{i-2}.
    n = m.rows
    d_prev, d = 1, m.data[0][0]
    for i in range(1, n):
        d_prev, d = d, m.data[i][i] * d - m.data[i - 1][i] * m.data[i][i - 1] * d_prev
    return d


def rat_inverse(m: IntMatrix) -> list[list[Fraction]]:
    """Exact inverse as a matrix of Fractions (Gauss-Jordan over Q)."""
    if not m.is_square():
        raise ValueError("inverse needs a square matrix")
    n = m.rows
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m.data)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def inverse_entry(m: IntMatrix, i: int, j: int) -> Fraction:
    """Single entry (i, j) of m**-1 via the cofactor formula; avoids a full inverse."""
    d = m.det()
    if d == 0:
        raise SingularMatrixError("matrix is singular")
    if m.rows == 1:
        return Fraction(1, d)
    cof = (-1) ** (i + j) * m.minor(j, i).det()
    return Fraction(cof, d)


@dataclass(frozen=True)
class SNFResult:
    """Diagonal of the Smith normal form plus optional unimodular transforms.

    diagonal entries are non-negative and each divides the next;
    when transforms are present, U @ m @ V equals the diagonal matrix.
    """

    diagonal: tuple[int, ...]
    U: IntMatrix | None = None
    V: IntMatrix | None = None

    def cokernel_orders(self) -> tuple[int, ...]:
        """The orders of the cyclic factors of coker (0 encodes a free Z factor)."""
        return tuple(d for d in self.diagonal if d != 1)

    def group_description(self) -> str:
        parts = []
        for d in self.diagonal:
            if d == 0:
                parts.append("Z")
            elif d > 1:
                parts.append(f"Z/{d}")
        return " + ".join(parts) if parts else "0"


def smith_normal_form(m: IntMatrix, transforms: bool = False) -> SNFResult:
    """Smith normal form by classical gcd-driven row/column reduction."""
    a = [row[:] for row in m.data]
    nr, nc = m.rows, m.cols
    U = IntMatrix.identity(nr).data if transforms else None
    V = IntMatrix.identity(nc).data if transforms else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, factor):
        a[dst] = [x + factor * y for x, y in zip(a[dst], a[src])]
        if U is not None:
            U[dst] = [x + factor * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, factor):
        for row in a:
            row[dst] += factor * row[src]
        if V is not None:
            for row in V:
                row[dst] += factor * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        if U is not None:
            U[i] = [-x for x in U[i]]

    t = 0
    while t < min(nr, nc):
        exhausted = False
        while True:
            # Move the smallest-magnitude nonzero entry of the trailing block
            # to (t, t); re-selecting it globally after every pass keeps the
            # reduction quotients (and hence entry growth) small.
            pivot = None
            for i in range(t, nr):
                for j in range(t, nc):
                    if a[i][j] != 0 and (
                        pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])
                    ):
                        pivot = (i, j)
            if pivot is None:
                exhausted = True
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = a[t][t]
            clean = True
            for i in range(t + 1, nr):
                if a[i][t] != 0:
                    add_row(t, i, -(a[i][t] // p))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, nc):
                if a[t][j] != 0:
                    add_col(t, j, -(a[t][j] // p))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue  # leftover remainders are smaller than |p|; re-pick
            culprit = next(
                (
                    i
                    for i in range(t + 1, nr)
                    if any(a[i][j] % p != 0 for j in range(t + 1, nc))
                ),
                None,
            )
            if culprit is None:
                break
            add_row(culprit, t, 1)
        if exhausted:
            break
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    diag = tuple(a[i][i] for i in range(min(nr, nc)))
    return SNFResult(
        diagonal=diag,
        U=IntMatrix(U) if U is not None else None,
        V=IntMatrix(V) if V is not None else None,
    )


def corner_cofactor_gcd(m: IntMatrix) -> int:
    """gcd of the four corner cofactors of a square matrix.

    For a nonsingular matrix the cokernel is cyclic iff the gcd of ALL
    corank-1 minors is 1; a subset gcd of 1 is therefore a sound cyclicity
    certificate.  The corner minors of banded matrices stay banded, so this
    is cheap on the surgery presentations.
    """
    n = m.rows
    g = 0
    for i, j in ((0, 0), (n - 1, n - 1), (0, n - 1), (n - 1, 0)):
        g = math.gcd(g, m.minor(i, j).det())
        if g == 1:
            return 1
    return g
