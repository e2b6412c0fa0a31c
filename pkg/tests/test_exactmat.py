import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from peg.exactmat import (
    IntMatrix,
    SingularMatrixError,
    inverse_entry,
    rat_inverse,
    smith_normal_form,
)


def random_matrix(rng, rows, cols, lo=-20, hi=20):
    return IntMatrix([[int(rng.integers(lo, hi + 1)) for _ in range(cols)] for _ in range(rows)])


def minor_gcd_diagonal(m: IntMatrix):
    """Independent SNF oracle: d_k = D_k / D_{k-1} with D_k the gcd of all
    k x k minors (determinant-divisor formula)."""
    size = min(m.rows, m.cols)
    dets_prev = 1
    diag = []
    for k in range(1, size + 1):
        g = 0
        for rows in combinations(range(m.rows), k):
            for cols in combinations(range(m.cols), k):
                sub = IntMatrix([[m.data[i][j] for j in cols] for i in rows])
                g = math.gcd(g, sub.det())
        if g == 0:
            diag.extend([0] * (size - len(diag)))
            break
        diag.append(g // dets_prev)
        dets_prev = g
    return tuple(diag)


def test_snf_identity():
    assert smith_normal_form(IntMatrix.identity(2)).diagonal == (1, 1)


def test_snf_axis_matrix():
    assert smith_normal_form(IntMatrix([[-5, 5], [5, -5]])).diagonal == (5, 0)


def test_snf_diag_2_3():
    assert smith_normal_form(IntMatrix([[2, 0], [0, 3]])).diagonal == (1, 6)


def test_snf_properties_random(rng):
    for _ in range(200):
        rows = int(rng.integers(1, 7))
        cols = int(rng.integers(1, 7))
        m = random_matrix(rng, rows, cols)
        res = smith_normal_form(m, transforms=True)
        # Divisibility chain.
        diag = res.diagonal
        for a, b in zip(diag, diag[1:]):
            assert a >= 0
            if a != 0:
                assert b % a == 0
            else:
                assert b == 0
        # Exact reconstruction by unimodular transforms.
        prod = res.U @ m @ res.V
        for i in range(rows):
            for j in range(cols):
                assert prod.data[i][j] == (diag[i] if i == j and i < len(diag) else 0)
        assert abs(res.U.det()) == 1
        assert abs(res.V.det()) == 1


def test_snf_against_minor_gcd_oracle(rng):
    for _ in range(200):
        rows = int(rng.integers(1, 7))
        cols = int(rng.integers(1, 7))
        m = random_matrix(rng, rows, cols, lo=-9, hi=9)
        assert smith_normal_form(m).diagonal == minor_gcd_diagonal(m)


def test_rat_inverse_examples():
    assert rat_inverse(IntMatrix([[-7]])) == [[Fraction(-1, 7)]]
    inv = rat_inverse(IntMatrix([[2, 3], [3, 2]]))
    assert inv == [
        [Fraction(2, -5), Fraction(-3, -5)],
        [Fraction(-3, -5), Fraction(2, -5)],
    ]
    inv = rat_inverse(IntMatrix([[-4, -3], [-3, -4]]))
    assert inv == [
        [Fraction(-4, 7), Fraction(3, 7)],
        [Fraction(3, 7), Fraction(-4, 7)],
    ]


def test_rat_inverse_reconstructs_identity(rng):
    count = 0
    while count < 60:
        n = int(rng.integers(1, 6))
        m = random_matrix(rng, n, n)
        if m.det() == 0:
            continue
        count += 1
        inv = rat_inverse(m)
        for i in range(n):
            for j in range(n):
                s = sum(Fraction(m.data[i][k]) * inv[k][j] for k in range(n))
                assert s == (1 if i == j else 0)


def test_rat_inverse_singular():
    with pytest.raises(SingularMatrixError):
        rat_inverse(IntMatrix([[1, 2], [2, 4]]))


def test_inverse_entry_matches_full_inverse(rng):
    count = 0
    while count < 40:
        n = int(rng.integers(1, 6))
        m = random_matrix(rng, n, n, lo=-8, hi=8)
        if m.det() == 0:
            continue
        count += 1
        inv = rat_inverse(m)
        for i in range(n):
            for j in range(n):
                assert inverse_entry(m, i, j) == inv[i][j]


def test_det_tridiagonal_matches_bareiss(rng):
    for _ in range(50):
        n = int(rng.integers(3, 12))
        diag = [int(rng.integers(-9, 10)) for _ in range(n)]
        off = [int(rng.integers(-9, 10)) for _ in range(n - 1)]
        data = [[0] * n for _ in range(n)]
        for i in range(n):
            data[i][i] = diag[i]
            if i + 1 < n:
                data[i][i + 1] = off[i]
                data[i + 1][i] = off[i]
        m = IntMatrix(data)
        import peg.exactmat as em

        assert em._tridiag_det(m) == em._bareiss_det(m)


def test_matmul_and_transpose():
    a = IntMatrix([[1, 2], [3, 4]])
    b = IntMatrix([[5, 6], [7, 8]])
    assert (a @ b).data == [[19, 22], [43, 50]]
    assert a.transpose().data == [[1, 3], [2, 4]]
