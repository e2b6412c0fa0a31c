from fractions import Fraction

import pytest

from peg.exactmat import IntMatrix, SingularMatrixError
from peg.linking import (
    LinkingForm,
    UnsupportedPresentationError,
    axis_surgery_homology,
    find_obstructed_k,
    form_from_presentation,
    mobius_obstruction_topological,
    my_check,
    represented_squares,
    torus_sigma_matrix,
    tridiagonal_matrix,
)
from peg.numtheory import is_prime, primes_from, square_classes_mod
from peg.report import Verdict


def brute_squares(p, q):
    return {Fraction(q * x * x % p, p) for x in range(p)}


class TestLinkingForm:
    def test_canonicalization(self):
        f = LinkingForm(5, 8)
        assert f.coeff == 3
        f = LinkingForm(5, -2)
        assert f.coeff == 3

    def test_non_unit_rejected(self):
        with pytest.raises(ValueError):
            LinkingForm(15, 3)


class TestRepresentedSquares:
    def test_three_fifths(self):
        assert represented_squares(LinkingForm(5, 3)) == {
            Fraction(0),
            Fraction(3, 5),
            Fraction(2, 5),
        }

    def test_one_over_p(self):
        for p in (3, 5, 7, 13):
            assert represented_squares(LinkingForm(p, 1)) == {
                Fraction(x * x % p, p) for x in range(p)
            }

    def test_six_thirteenths(self):
        assert represented_squares(LinkingForm(13, 6)) == {
            Fraction(0),
            Fraction(2, 13),
            Fraction(5, 13),
            Fraction(6, 13),
            Fraction(7, 13),
            Fraction(8, 13),
            Fraction(11, 13),
        }

    def test_matches_square_class_scaling(self):
        for p in (7, 11, 13, 15, 21):
            for q in range(1, p):
                if Fraction(q, p).denominator != p:
                    continue
                form = LinkingForm(p, q)
                assert represented_squares(form) == {
                    Fraction(q * s % p, p) for s in square_classes_mod(p)
                }

    def test_count_for_odd_prime(self):
        # (p-1)/2 nonzero squares plus zero.
        for p in (5, 7, 11, 13, 23):
            assert len(represented_squares(LinkingForm(p, 2))) == (p - 1) // 2 + 1


class TestFormFromPresentation:
    def test_rank_one(self):
        assert form_from_presentation(IntMatrix([[-7]])) == LinkingForm(7, 1)

    def test_sigma245_block(self):
        assert form_from_presentation(IntMatrix([[-3, 2], [2, -3]])) == LinkingForm(5, 3)

    def test_seven_block(self):
        assert form_from_presentation(IntMatrix([[-4, -3], [-3, -4]])) == LinkingForm(7, 4)

    def test_singular_rejected(self):
        with pytest.raises(SingularMatrixError):
            form_from_presentation(IntMatrix([[1, 1], [1, 1]]))

    def test_non_cyclic_rejected(self):
        with pytest.raises(UnsupportedPresentationError):
            form_from_presentation(IntMatrix([[3, 0], [0, 3]]))

    def test_generator_fallback_path(self):
        # No standard basis vector generates coker([[5,0],[0,3]]) = Z/15,
        # so the generator is lifted from the Smith transforms.
        form = form_from_presentation(IntMatrix([[5, 0], [0, 3]]))
        assert form.order == 15
        # The form is <-(1/5 + 1/3)> = <7/15> up to a square unit.
        expected = {(-(Fraction(a * a, 5) + Fraction(b * b, 3))) % 1 for a in range(5) for b in range(3)}
        assert represented_squares(form) == expected


class TestMyCheck:
    def test_t45(self):
        report = my_check(LinkingForm(5, 3), 5)
        assert report.verdict is Verdict.OBSTRUCTED_TOPOLOGICAL
        assert report.get("represented_squares") == {Fraction(0), Fraction(2, 5), Fraction(3, 5)}

    def test_trefoil_inconclusive(self):
        for q in (1, 2):
            assert my_check(LinkingForm(3, q), 3).verdict is Verdict.INCONCLUSIVE

    def test_t13_14(self):
        assert my_check(LinkingForm(13, 6), 13).verdict is Verdict.OBSTRUCTED_TOPOLOGICAL

    def test_square_free_precondition(self):
        report = my_check(LinkingForm(9, 2), 9)
        assert report.verdict is Verdict.PRECONDITION_FAILED

    def test_orientation_invariance(self):
        # Replacing q by -q never changes the verdict: the target set {1/p, -1/p}
        # is symmetric.
        for p in range(3, 120, 2):
            for q in (1, 2, 3):
                if Fraction(q, p).denominator != p:
                    continue
                v1 = my_check(LinkingForm(p, q), p).verdict
                v2 = my_check(LinkingForm(p, -q), p).verdict
                assert v1 == v2

    def test_agrees_with_plain_enumeration(self):
        from peg.numtheory import is_square_free

        for p in range(3, 200, 2):
            if not is_square_free(p):
                continue
            for q in (1, 2, p - 1):
                if Fraction(q, p).denominator != p:
                    continue
                verdict = my_check(LinkingForm(p, q), p).verdict
                vals = {(q * x * x) % p for x in range(p)}
                obstructed = 1 not in vals and (p - 1) not in vals
                assert (verdict is Verdict.OBSTRUCTED_TOPOLOGICAL) == obstructed


class TestSurgeryMatrices:
    def test_examples(self):
        assert torus_sigma_matrix(2, 1).data == [[-3, 2], [2, -3]]
        assert torus_sigma_matrix(7, -1).data == [[6, 7], [7, 6]]
        m = torus_sigma_matrix(1, 1)
        assert m.data == [[-2, 1], [1, -2]] and abs(m.det()) == 3

    def test_determinants(self):
        for n in range(1, 30):
            assert abs(torus_sigma_matrix(n, 1).det()) == 2 * n + 1
            assert abs(torus_sigma_matrix(n, -1).det()) == 2 * n - 1

    def test_axis_homology(self):
        assert axis_surgery_homology(5).diagonal == (5, 0)
        assert axis_surgery_homology(1).diagonal == (1, 0)
        assert axis_surgery_homology(12).diagonal == (12, 0)
        assert axis_surgery_homology(5).group_description() == "Z/5 + Z"


class TestTridiagonal:
    def test_small_examples(self):
        assert abs(tridiagonal_matrix(3, 1, 1).det()) == 7
        assert abs(tridiagonal_matrix(3, 9, 1).det()) == 55
        assert abs(tridiagonal_matrix(3, 1, -1).det()) == 5

    def test_determinant_identity(self):
        for p in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
            for k in range(1, 11):
                for sign in (1, -1):
                    m = tridiagonal_matrix(p, k, sign)
                    assert abs(m.det()) == 2 * k * p + sign

    def test_first_entry_identity(self):
        # First entry of -Q^{-1} equals (qr -+ p)/qr mod 1 up to a global sign.
        from peg.exactmat import inverse_entry

        for p in (3, 5, 7, 11, 13, 17, 19):
            for k in range(1, 9):
                for sign in (1, -1):
                    q = tridiagonal_matrix(p, k, sign)
                    qr = 2 * k * p + sign
                    first = (-inverse_entry(q, 0, 0)) % 1
                    expected = Fraction(qr - sign * p, qr) % 1
                    assert first in (expected, (-expected) % 1)

    def test_rejects_bad_p(self):
        with pytest.raises(ValueError):
            tridiagonal_matrix(4, 1, 1)
        with pytest.raises(ValueError):
            tridiagonal_matrix(9, 1, 1)


class TestMobiusObstruction:
    def test_known_instances(self):
        r = mobius_obstruction_topological(3, 9, 1)
        assert r.verdict is Verdict.OBSTRUCTED_TOPOLOGICAL
        assert r.get("determinant") == 55
        r = mobius_obstruction_topological(3, 26, -1)
        assert r.verdict is Verdict.OBSTRUCTED_TOPOLOGICAL
        assert r.get("determinant") == 155

    def test_non_square_free(self):
        # 2*4*3 + 1 = 25.
        r = mobius_obstruction_topological(3, 4, 1)
        assert r.verdict is Verdict.PRECONDITION_FAILED

    def test_even_p_rejected(self):
        with pytest.raises(ValueError):
            mobius_obstruction_topological(2, 9, 1)


class TestFindObstructedK:
    def test_p3_plus(self):
        assert 9 in find_obstructed_k(3, 1, 1, 10**4)

    def test_p3_minus(self):
        assert 26 in find_obstructed_k(3, -1, 1, 10**4)

    def test_p5_verified(self):
        ks = find_obstructed_k(5, 1, 1, 10**5)
        assert ks
        for k in ks:
            assert mobius_obstruction_topological(5, k, 1).verdict is Verdict.OBSTRUCTED_TOPOLOGICAL

    def test_bound_exhaustion_partial(self):
        assert find_obstructed_k(3, 1, 5, 10) == [9]

    def test_multiple(self):
        ks = find_obstructed_k(3, 1, 2, 10**4)
        assert len(ks) == 2 and ks[0] == 9
