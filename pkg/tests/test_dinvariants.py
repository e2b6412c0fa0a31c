from fractions import Fraction
from itertools import product

import pytest

from peg.dinvariants import (
    SpincClass,
    class_of,
    correction_value,
    d_of_class,
    d_table,
    lattice_matrix,
    smooth_mobius_obstruction,
    spinc_classes,
)
from peg.exactmat import IntMatrix, rat_inverse
from peg.report import Verdict


def oracle_d_values(q_mat: IntMatrix, box: int):
    """Independent correction-term oracle for any negative-definite even-or-odd
    symmetric matrix: enumerate characteristic covectors xi (xi_i = Q_ii mod 2)
    in a box, maximise (xi Q^{-1} xi + rank)/4 per coset of 2*Q*Z^rank."""
    n = q_mat.rows
    qinv = rat_inverse(q_mat)
    diag_parity = [q_mat.data[i][i] % 2 for i in range(n)]
    best: dict[tuple, Fraction] = {}
    rng = range(-box, box + 1)
    for xi in product(*[[2 * c + dp for c in rng] for dp in diag_parity]):
        # Coset label: solve xi mod 2Q exactly via reduction of Q^{-1} xi mod 1.
        y = tuple(
            (sum(Fraction(xi[j]) * qinv[i][j] for j in range(n)) / 2) % 1 for i in range(n)
        )
        val = (
            sum(Fraction(xi[i]) * qinv[i][j] * xi[j] for i in range(n) for j in range(n))
            + n
        ) / 4
        if y not in best or val > best[y]:
            best[y] = val
    return best


class TestSpincClasses:
    @pytest.mark.parametrize("n,count", [(1, 3), (3, 7), (11, 23)])
    def test_count(self, n, count):
        classes = spinc_classes(n)
        assert len(classes) == count
        assert len({c.index for c in classes}) == count

    def test_identification_matches_lattice(self):
        # Same class iff Q^{-1}(eta - eta') is integral.
        n = 3
        qinv = rat_inverse(lattice_matrix(n))
        etas = [(a, b) for a in range(-4, 5) for b in range(-4, 5)]
        for e1 in etas:
            for e2 in etas:
                d = (e1[0] - e2[0], e1[1] - e2[1])
                integral = all(
                    (qinv[i][0] * d[0] + qinv[i][1] * d[1]).denominator == 1 for i in range(2)
                )
                assert (class_of(n, e1) == class_of(n, e2)) == integral

    def test_conjugate(self):
        cls = class_of(3, (1, -1))
        assert cls.conjugate() == class_of(3, (-1, 1))


class TestDOfClass:
    def test_zero_class_is_half(self):
        assert d_of_class(3, class_of(3, (0, 0)))[0] == Fraction(1, 2)

    def test_n3_generator_class(self):
        d, eta = d_of_class(3, class_of(3, (1, -1)))
        assert d == Fraction(1, 2) - Fraction(2, 7) == Fraction(3, 14)
        assert eta in ((1, -1), (-1, 1))

    def test_n11_congruence_class(self):
        # The sum-zero representative (7,-7) gives 1/2 - 98/23 = -173/46, but
        # the class maximum is attained off the diagonal.
        cls = class_of(11, (7, -7))
        assert correction_value(11, (7, -7)) == Fraction(-173, 46)
        d, eta = d_of_class(11, cls)
        assert d == Fraction(-81, 46)
        assert abs(eta[0] + eta[1]) == 1

    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_against_characteristic_covector_oracle(self, n):
        # Any class maximum beats the (x, -x) representative, which bounds the
        # maximizer by |eta| <= n*sqrt(2); a box of 2n+2 is therefore exhaustive.
        q = lattice_matrix(n)
        oracle = oracle_d_values(q, box=2 * n + 2)
        table = d_table(n)
        assert sorted(oracle.values()) == sorted(v for v, _ in table.values())

    def test_negativity_off_diagonal(self):
        # For odd n (even lattice diagonal), any representative with
        # eta1+eta2 != 0 has strictly negative value.
        for n in (1, 3, 7, 11):
            for e1 in range(-6, 7):
                for e2 in range(-6, 7):
                    if e1 + e2 != 0:
                        assert correction_value(n, (e1, e2)) < 0

    def test_box_doubling_stable(self):
        for n in range(1, 16):
            for cls in spinc_classes(n):
                d1, _ = d_of_class(n, cls)
                d2, _ = d_of_class(n, cls, box=4 * (2 * n + 1))
                assert d1 == d2

    def test_all_values_at_most_half(self):
        for n in (1, 2, 3, 4, 11):
            table = d_table(n)
            for cls, (d, _) in table.items():
                assert d <= Fraction(1, 2)
                if cls.index != 0 or n % 2 == 0:
                    assert d < Fraction(1, 2)
            if n % 2 == 1:
                assert table[spinc_classes(n)[n]][0] == Fraction(1, 2)

    def test_blow_up_stability(self):
        # Appending a <-1> summand leaves the d-values unchanged.
        for n in (1, 2, 3):
            q = lattice_matrix(n)
            q_ext = IntMatrix(
                [row + [0] for row in q.data] + [[0, 0, -1]]
            )
            oracle2 = oracle_d_values(q, box=2 * n + 2)
            oracle3 = oracle_d_values(q_ext, box=2 * n + 2)
            assert sorted(oracle2.values()) == sorted(oracle3.values())


class TestSmoothObstruction:
    def test_t22_23(self):
        r = smooth_mobius_obstruction(11)
        assert r.verdict is Verdict.OBSTRUCTED_SMOOTH_ONLY
        assert r.get("d_candidate_sum_zero") == Fraction(-173, 46)
        assert r.get("bound_c1_sq_plus_1_over_4") == Fraction(11, 46)

    def test_t6_7_equality(self):
        r = smooth_mobius_obstruction(3)
        assert r.verdict is Verdict.INCONCLUSIVE
        assert r.get("d_candidate_sum_zero") == Fraction(3, 14)
        assert r.get("bound_c1_sq_plus_1_over_4") == Fraction(3, 14)
        assert r.get("equality") is True
        assert r.get("n_plus_1_is_square") is True

    def test_n5_precondition(self):
        assert smooth_mobius_obstruction(5).verdict is Verdict.PRECONDITION_FAILED

    def test_n_not_prime_precondition(self):
        # n = 7: 2n+1 = 15 not prime.
        assert smooth_mobius_obstruction(7).verdict is Verdict.PRECONDITION_FAILED

    def test_more_obstructed_values(self):
        # n = 3 (mod 4), 2n+1 prime, n+1 not a square: obstructed.
        for n in (11, 23, 51):
            r = smooth_mobius_obstruction(n)
            assert r.verdict is Verdict.OBSTRUCTED_SMOOTH_ONLY
            assert r.get("d_of_class") == r.get("d_of_conjugate_class")

    def test_square_n_plus_1_gives_equality(self):
        # n = 35: 71 prime, but n+1 = 36 is a square, so the congruence is met
        # with exact equality and nothing is obstructed.
        r = smooth_mobius_obstruction(35)
        assert r.verdict is Verdict.INCONCLUSIVE
        assert r.get("equality") is True
