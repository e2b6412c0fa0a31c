"""Negative continued fractions, linear-plumbing chains, and definite-lattice
embedding obstructions for the 2-bridge knots K(p/(p-2)).

A chain [a1, ..., al] is the linear plumbing with pairing matrix
diag(-a_i) and +-1 between neighbours.  Embedding it into -Z^N (or -E8)
means finding vectors v_i with v_i . v_i = a_i under the Euclidean dot
product, |v_i . v_{i+1}| = 1 and orthogonality otherwise; searches are
exhaustive, so a miss is a certificate within the stated space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linking import LinkingForm, my_check, represented_squares
from .numtheory import is_prime, is_square_free
from .report import ObstructionReport, Verdict


class SearchBoundError(ValueError):
    pass


@dataclass(frozen=True)
class ChainWeights:
    """Weights (absolute values >= 2) of a linear plumbing chain."""

    weights: tuple[int, ...]

    def __post_init__(self):
        if not self.weights:
            raise ValueError("chain must be nonempty")
        if any(w < 2 for w in self.weights):
            raise ValueError("chain weights must be >= 2")

    def __len__(self):
        return len(self.weights)

    def evaluate(self) -> Fraction:
        """Value of the negative continued fraction a1 - 1/(a2 - 1/(...))."""
        value = Fraction(self.weights[-1])
        for a in reversed(self.weights[:-1]):
            value = a - 1 / value
        return value


@dataclass(frozen=True)
class Embedding:
    """One integer vector per chain node; pairing checked exactly."""

    vectors: tuple[tuple[int, ...], ...]

    def gram(self) -> list[list[int]]:
        vs = self.vectors
        return [[sum(x * y for x, y in zip(a, b)) for b in vs] for a in vs]

    def satisfies(self, chain: ChainWeights) -> bool:
        g = self.gram()
        n = len(chain)
        if len(self.vectors) != n:
            return False
        for i in range(n):
            for j in range(n):
                if i == j:
                    ok = g[i][j] == chain.weights[i]
                elif abs(i - j) == 1:
                    ok = abs(g[i][j]) == 1
                else:
                    ok = g[i][j] == 0
                if not ok:
                    return False
        return True


def neg_cf(p: int, q: int) -> ChainWeights:
    """Negative (Hirzebruch-Jung) continued fraction of p/q, p > q > 0 coprime."""
    from math import gcd

    if not (p > q > 0) or gcd(p, q) != 1:
        raise ValueError(f"need p > q > 0 coprime, got {p}/{q}")
    p0, q0 = p, q
    weights = []
    while q > 0:
        a = -(-p // q)  # ceil division
        weights.append(a)
        p, q = q, a * q - p
    chain = ChainWeights(tuple(weights))
    assert chain.evaluate() == Fraction(p0, q0), "continued-fraction round trip failed"
    return chain


def _vectors_of_norm(norm: int, dim: int, bound: int):
    """All integer vectors of squared length `norm` with |coords| <= bound, in
    lexicographic order.  Exhaustive whenever bound**2 >= norm."""
    out = []
    b2 = bound * bound

    def rec(prefix, remaining, slots):
        if remaining == 0:
            out.append(tuple(prefix) + (0,) * slots)
            return
        if slots == 0 or slots * b2 < remaining:
            return
        for c in range(-bound, bound + 1):
            c2 = c * c
            if c2 <= remaining:
                prefix.append(c)
                rec(prefix, remaining - c2, slots - 1)
                prefix.pop()

    rec([], norm, dim)
    return out


def _chain_embeddings(chain: ChainWeights, candidate_lists, limit=None):
    """Backtracking over per-node candidate vectors; yields embeddings."""
    n = len(chain)
    found = []

    def rec(chosen):
        if limit is not None and len(found) >= limit:
            return
        i = len(chosen)
        if i == n:
            found.append(Embedding(tuple(chosen)))
            return
        for v in candidate_lists[i]:
            ok = True
            for j, w in enumerate(chosen):
                dot = sum(x * y for x, y in zip(v, w))
                if j == i - 1:
                    if abs(dot) != 1:
                        ok = False
                        break
                elif dot != 0:
                    ok = False
                    break
            if ok:
                chosen.append(v)
                rec(chosen)
                chosen.pop()
                if limit is not None and len(found) >= limit:
                    return

    rec([])
    return found


_COORD_BOUND = 3  # exhaustive for weights <= 9: every coordinate of a norm-w vector obeys c^2 <= w


def _square_partitions(norm: int, max_len: int, max_val: int):
    """Non-increasing positive tuples whose squares sum to norm."""
    out = []

    def rec(prefix, remaining, top):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        if len(prefix) >= max_len:
            return
        v = min(top, remaining)
        while v * v > remaining:
            v -= 1
        for c in range(v, 0, -1):
            prefix.append(c)
            rec(prefix, remaining - c * c, c)
            prefix.pop()

    rec([], norm, max_val)
    return out


def _canonical_chain_embeddings(chain: ChainWeights, n_dim: int, limit=None):
    """Exhaustive chain search up to signed coordinate permutations.

    Canonical form: coordinates are introduced in order of first use, and the
    entries of a vector on coordinates it introduces are positive and
    non-increasing.  Any embedding maps to such a representative by a signed
    permutation fixing the already-placed vectors, so finding none certifies
    that no embedding exists at all.
    """
    ws = chain.weights
    found: list[Embedding] = []

    def rec(chosen, seen):
        if limit is not None and len(found) >= limit:
            return
        i = len(chosen)
        if i == len(ws):
            found.append(Embedding(tuple(v + (0,) * (n_dim - len(v)) for v in chosen)))
            return
        w = ws[i]
        last = len(chosen) - 1
        for used in range(min(w, seen * _COORD_BOUND**2) + 1):
            for seen_part in _vectors_of_norm(used, seen, _COORD_BOUND) if seen else ([()] if used == 0 else []):
                ok = True
                for j, v in enumerate(chosen):
                    dot = sum(x * y for x, y in zip(seen_part, v))
                    if (abs(dot) != 1) if j == last else (dot != 0):
                        ok = False
                        break
                if not ok:
                    continue
                for fresh in _square_partitions(w - used, n_dim - seen, _COORD_BOUND):
                    rec(chosen + [tuple(seen_part) + fresh], seen + len(fresh))

    rec([], 0)
    return found


def embed_chain_Zn(weights: ChainWeights, n_dim: int, all_embeddings: bool = False):
    """Embed the chain into the diagonal lattice -Z^n_dim, or certify none.

    Exhaustive up to the signed-permutation symmetry of Z^n_dim, with
    coordinates in [-3, 3]; that covers every vector of squared length <= 9,
    so larger weights are refused rather than searched incompletely.
    """
    if n_dim < 1:
        raise ValueError("n_dim must be >= 1")
    if max(weights.weights) > _COORD_BOUND**2 or max(weights.weights) > 4 * n_dim:
        raise SearchBoundError(
            f"weight {max(weights.weights)} exceeds the exhaustive search bound"
        )
    found = _canonical_chain_embeddings(weights, n_dim, limit=None if all_embeddings else 1)
    if all_embeddings:
        return found
    return found[0] if found else None


# E8 as the even sublattice model: integer vectors with even coordinate sum,
# plus the coset of all-half-integer vectors with even sum.  Enumeration works
# in doubled coordinates u = 2v (all even or all odd, sum u = 0 mod 4).
def _e8_vectors_of_norm(norm: int):
    import math

    if norm % 2 == 1:
        return []
    out = []
    target = 4 * norm
    top = math.isqrt(target)
    for parity in (0, 1):
        cands = [c for c in range(-top, top + 1) if abs(c) % 2 == parity]

        def rec(prefix, remaining, slots):
            if parity == 0 and remaining == 0:
                if sum(prefix) % 4 == 0:
                    out.append(tuple(Fraction(c, 2) for c in prefix) + (Fraction(0),) * slots)
                return
            if slots == 0 or remaining < slots * parity:
                return
            for c in cands:
                if c * c <= remaining:
                    prefix.append(c)
                    rec(prefix, remaining - c * c, slots - 1)
                    prefix.pop()

        rec([], target, 8)
    return out


def embed_chain_E8(weights: ChainWeights):
    """Embed the chain into -E8, or None.  Any odd weight gives an immediate
    evenness certificate; even weights are searched exhaustively."""
    if any(w % 2 == 1 for w in weights.weights):
        return None
    candidates = []
    for i, w in enumerate(weights.weights):
        vecs = _e8_vectors_of_norm(w)
        if i == 0:
            vecs = [v for v in vecs if next(x for x in v if x != 0) > 0]
        candidates.append(vecs)
    found = _chain_embeddings(weights, candidates, limit=1)
    return found[0] if found else None


def two_bridge_check(p: int) -> ObstructionReport:
    """Moebius-band obstruction pipeline for the 2-bridge knot K(p/(p-2)).

    For prime p = 7 (mod 8), p > 7: the linking form <2/p> of L(p, p-2)
    forces a definite filling, and Donaldson's theorem requires the plumbing
    chain [2, ..., 2, 3] to embed with co-rank 1 in a diagonal lattice; the
    embedding fails, so no smooth band exists.  For p = 15 the rank-8 lattice
    is Z^8 or E8; both fail, which obstructs even locally-flat bands.
    """
    if p % 2 == 0:
        raise ValueError("p must be odd")
    if p < 7:
        raise ValueError("p must be >= 7")
    report = ObstructionReport(subject=f"K({p}/{p - 2})", verdict=Verdict.INCONCLUSIVE)
    report.add("p", p)
    report.add("p_mod_8", p % 8)

    special_15 = p == 15
    if not special_15 and not (is_prime(p) and p % 8 == 7 and p > 7):
        report.verdict = Verdict.PRECONDITION_FAILED
        report.add(
            "reason",
            "requires a prime p = 7 (mod 8) with p > 7, or the special case p = 15",
        )
        return report

    form = LinkingForm(p, 2)
    squares = represented_squares(form)
    plus, minus = Fraction(1, p), Fraction(p - 1, p)
    report.add("linking_form", str(form))
    report.add("plus_represented", plus in squares)
    report.add("minus_represented", minus in squares)
    # Exactly one sign is represented, which pins the filling's definiteness
    # (the Murakami-Yasuhara test alone is therefore inconclusive here).
    report.add("definite_sign_forced", (plus in squares) != (minus in squares))

    chain = neg_cf(p, p - 2)
    rank = len(chain)
    report.add("chain", list(chain.weights))
    report.add("embedding_rank", rank + 1)
    zn = embed_chain_Zn(chain, rank + 1)
    report.add("embeds_in_Zn", zn is not None)
    if zn is not None:
        report.add("Zn_embedding", [list(v) for v in zn.vectors])
        report.verdict = Verdict.INCONCLUSIVE
        return report

    if not special_15:
        report.verdict = Verdict.OBSTRUCTED_SMOOTH_ONLY
        return report

    # p = 15: rank-8 definite lattices are Z^8 and E8 only; check both, and
    # record the direct linking-form route, which independently obstructs.
    e8 = embed_chain_E8(chain)
    report.add("embeds_in_E8", e8 is not None)
    if is_square_free(p):
        direct = my_check(form, p)
        report.add("direct_linking_route_verdict", direct.verdict.value)
        report.add("direct_represented_squares", represented_squares(form))
    if e8 is None:
        report.verdict = Verdict.OBSTRUCTED_TOPOLOGICAL
    return report
