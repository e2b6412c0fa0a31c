from fractions import Fraction

import pytest

from peg.lattices import (
    ChainWeights,
    Embedding,
    SearchBoundError,
    embed_chain_E8,
    embed_chain_Zn,
    neg_cf,
    two_bridge_check,
    _e8_vectors_of_norm,
)
from peg.report import Verdict


class TestNegCF:
    def test_examples(self):
        assert neg_cf(3, 1).weights == (3,)
        assert neg_cf(7, 5).weights == (2, 2, 3)
        assert neg_cf(15, 13).weights == (2, 2, 2, 2, 2, 2, 3)

    def test_round_trip(self):
        for p in range(5, 200, 2):
            chain = neg_cf(p, p - 2)
            assert chain.evaluate() == Fraction(p, p - 2)

    def test_chain_shape_for_p_over_p_minus_2(self):
        for p in range(5, 200, 2):
            w = neg_cf(p, p - 2).weights
            assert w == (2,) * ((p - 3) // 2) + (3,)

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            neg_cf(4, 6)
        with pytest.raises(ValueError):
            neg_cf(6, 3)  # not coprime
        with pytest.raises(ValueError):
            neg_cf(5, 0)


class TestZnEmbedding:
    def test_two_chain_exists(self):
        emb = embed_chain_Zn(ChainWeights((2, 2)), 3)
        assert emb is not None and emb.satisfies(ChainWeights((2, 2)))

    def test_single_3_in_rank_2_fails(self):
        assert embed_chain_Zn(ChainWeights((3,)), 2) is None

    def test_p15_chain_fails_in_z8(self):
        chain = ChainWeights((2,) * 6 + (3,))
        assert embed_chain_Zn(chain, 8) is None

    def test_p7_chain_embeds(self):
        # [2,2,3] does embed in Z^4, consistent with K(7/5) not being obstructed.
        chain = ChainWeights((2, 2, 3))
        emb = embed_chain_Zn(chain, 4)
        assert emb is not None and emb.satisfies(chain)

    def test_search_bound_guard(self):
        with pytest.raises(SearchBoundError):
            embed_chain_Zn(ChainWeights((16,)), 2)

    def test_all_embeddings_valid_and_chainlike(self):
        # Every embedding of a chain of 2s is the consecutive-difference chain
        # up to signed permutation: each vector has two unit entries, shares
        # exactly one coordinate with its neighbour, none with the others.
        for length in (2, 3, 4):
            chain = ChainWeights((2,) * length)
            embs = embed_chain_Zn(chain, length + 2, all_embeddings=True)
            assert embs
            for emb in embs:
                assert emb.satisfies(chain)
                supports = [frozenset(i for i, c in enumerate(v) if c) for v in emb.vectors]
                for s in supports:
                    assert len(s) == 2
                for i in range(len(supports)):
                    for j in range(i + 1, len(supports)):
                        expected = 1 if j == i + 1 else 0
                        assert len(supports[i] & supports[j]) == expected


class TestE8Embedding:
    def test_root_count(self):
        assert len(_e8_vectors_of_norm(2)) == 240

    def test_odd_weight_none(self):
        assert embed_chain_E8(ChainWeights((2,) * 6 + (3,))) is None
        assert embed_chain_E8(ChainWeights((5,))) is None

    def test_two_chain_embeds(self):
        chain = ChainWeights((2, 2))
        emb = embed_chain_E8(chain)
        assert emb is not None
        g = emb.gram()
        assert g[0][0] == 2 and g[1][1] == 2 and abs(g[0][1]) == 1


class TestTwoBridge:
    def test_p23_smooth_obstruction(self):
        r = two_bridge_check(23)
        assert r.verdict is Verdict.OBSTRUCTED_SMOOTH_ONLY
        assert r.get("chain") == [2] * 10 + [3]
        assert r.get("embedding_rank") == 12
        assert r.get("embeds_in_Zn") is False

    def test_p15_topological(self):
        r = two_bridge_check(15)
        assert r.verdict is Verdict.OBSTRUCTED_TOPOLOGICAL
        assert r.get("embeds_in_Zn") is False
        assert r.get("embeds_in_E8") is False
        # The direct enumeration route independently obstructs K(15/13).
        assert r.get("direct_linking_route_verdict") == "ObstructedTopological"

    def test_p7_precondition(self):
        assert two_bridge_check(7).verdict is Verdict.PRECONDITION_FAILED

    def test_non_matching_prime_precondition(self):
        # 11 is prime but 11 = 3 (mod 8).
        assert two_bridge_check(11).verdict is Verdict.PRECONDITION_FAILED

    def test_even_p_rejected(self):
        with pytest.raises(ValueError):
            two_bridge_check(10)

    def test_more_primes_7_mod_8(self):
        for p in (31, 47):
            r = two_bridge_check(p)
            assert r.verdict is Verdict.OBSTRUCTED_SMOOTH_ONLY


def test_embedding_gram_checker():
    emb = Embedding(vectors=((1, -1, 0), (0, 1, -1)))
    assert emb.satisfies(ChainWeights((2, 2)))
    assert not emb.satisfies(ChainWeights((2, 3)))
