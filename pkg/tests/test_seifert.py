import pytest

from peg.exactmat import IntMatrix
from peg.report import Verdict
from peg.seifert import (
    PairCertificate,
    alexander_one_2x2,
    build_Mk,
    extend_certificate,
    find_pair,
    gamma4_bounds,
)

PAPER_A = (-1, -1, 0, 1)
PAPER_B = (4, 1, 2, -4)


class TestBuildMk:
    def test_n5_k1(self):
        assert build_Mk(5, 1).entries.data == [
            [3, 3, 4, 4],
            [4, 3, 3, 4],
            [4, 4, 3, 3],
            [4, 4, 4, 3],
        ]

    def test_n5_k0_definite(self):
        m0 = build_Mk(5, 0)
        assert m0.entries.data == [
            [-1, -1, 0, 0],
            [0, -1, -1, 0],
            [0, 0, -1, -1],
            [0, 0, 0, -1],
        ]
        # x^T M0 x is negative definite: leading minors of -(M0 + M0^T) positive.
        s = IntMatrix(
            [[-(m0.entries.data[i][j] + m0.entries.data[j][i]) for j in range(4)] for i in range(4)]
        )
        for k in range(1, 5):
            sub = IntMatrix([row[:k] for row in s.data[:k]])
            assert sub.det() > 0

    def test_n3_k1(self):
        assert build_Mk(3, 1).entries.data == [[3, 3], [4, 3]]

    def test_structure_law(self):
        for n in range(3, 21):
            for k in range(0, 6):
                mk = build_Mk(n, k).entries
                m0 = build_Mk(n, 0).entries
                for i in range(n - 1):
                    for j in range(n - 1):
                        assert mk.data[i][j] - m0.data[i][j] == 4 * k

    def test_top_left_nesting(self):
        big = build_Mk(9, 1).entries
        small = build_Mk(5, 1).entries
        for i in range(4):
            for j in range(4):
                assert big.data[i][j] == small.data[i][j]


class TestAlexanderOne:
    def test_examples(self):
        assert alexander_one_2x2(IntMatrix([[0, 1], [0, 0]]))
        assert alexander_one_2x2(IntMatrix([[0, 0], [-1, 1]]))
        assert not alexander_one_2x2(IntMatrix([[1, 1], [0, 1]]))  # trefoil form

    def test_unimodular_congruence_invariance(self, rng):
        mats = [[[0, 1], [0, 0]], [[0, 0], [-1, 1]], [[1, 1], [0, 1]], [[2, -1], [3, 0]]]
        for data in mats:
            a = IntMatrix(data)
            base = alexander_one_2x2(a)
            for _ in range(25):
                # Random unimodular P from elementary operations.
                p = IntMatrix.identity(2)
                for _ in range(4):
                    c = int(rng.integers(-3, 4))
                    if rng.integers(2):
                        p = p @ IntMatrix([[1, c], [0, 1]])
                    else:
                        p = p @ IntMatrix([[1, 0], [c, 1]])
                conj = p.transpose() @ a @ p
                assert alexander_one_2x2(conj) == base


class TestFindPair:
    def test_n5_certificate(self):
        cert = find_pair(build_Mk(5, 1), coord_bound=6)
        assert cert is not None
        assert cert.is_valid()
        assert alexander_one_2x2(cert.induced_2x2())

    def test_paper_vectors_validate(self):
        cert = extend_certificate(
            PairCertificate(a=PAPER_A, b=PAPER_B, products=(0, 0, 0, 0)), build_Mk(5, 1)
        )
        assert cert.products == (0, 0, -1, 1)
        assert cert.is_valid()

    def test_m0_definite_short_circuit(self):
        for n in (4, 5, 8):
            assert find_pair(build_Mk(n, 0), coord_bound=4) is None

    def test_n3_none(self):
        # 3x^2 + 7xy + 3y^2 = 0 has no nonzero integer solutions (disc 13).
        assert find_pair(build_Mk(3, 1), coord_bound=50) is None

    def test_determinism(self):
        c1 = find_pair(build_Mk(5, 1), coord_bound=6)
        c2 = find_pair(build_Mk(5, 1), coord_bound=6)
        assert c1 == c2

    def test_certificate_independence(self):
        cert = find_pair(build_Mk(5, 1), coord_bound=6)
        a, b = cert.a, cert.b
        # a and b are linearly independent.
        assert any(a[i] * b[j] != a[j] * b[i] for i in range(4) for j in range(4))


class TestGammaBounds:
    def test_n5(self):
        g = gamma4_bounds(5)
        assert g.status == "ok"
        assert (g.smooth, g.top_upper) == (4, 3)
        assert g.certificate is not None and g.certificate.is_valid()

    def test_n7_lower_bound(self):
        g = gamma4_bounds(7)
        assert (g.smooth, g.top_upper, g.top_lower) == (6, 5, 2)
        assert g.lower_bound_report.verdict is Verdict.OBSTRUCTED_TOPOLOGICAL
        assert g.lower_bound_report.get("form") == "<6/13>"

    def test_n4_precondition(self):
        assert gamma4_bounds(4).status == "PreconditionFailed"

    def test_padding_persists(self):
        base = extend_certificate(
            PairCertificate(a=PAPER_A, b=PAPER_B, products=(0, 0, 0, 0)), build_Mk(5, 1)
        )
        for n in range(5, 21):
            padded = extend_certificate(base, build_Mk(n, 1))
            assert padded.products == (0, 0, -1, 1)
            assert padded.is_valid()

    def test_no_lower_bound_when_not_5_mod_8(self):
        # 2n-1 = 9 for n = 5 is not prime; n = 6 gives 11 = 3 (mod 8).
        assert gamma4_bounds(5).top_lower is None
        assert gamma4_bounds(6).top_lower is None
