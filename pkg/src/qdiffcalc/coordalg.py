"""The coordinate algebra of SL_q(2) with a PBW normal form.

Used only as an independent cross-check of the functional-based
bi-invariance test.  Generators a, b, c, d are u^1_1, u^1_2, u^2_1, u^2_2.
The straightening rules are derived from the RTT relations of the R-matrix
in :mod:`qgroup` rather than typed in, and the determinant relation is
``ad - q bc = 1``.  Normal monomials are ``a^i b^j c^k`` and ``b^j c^k d^l``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .exactla import EchelonBuilder, SparseMat, rank_kernel, vec_axpy
from .qgroup import CalcParams, rhat

__all__ = ["SLq2", "coinvariant_dim"]

GENS = "abcd"
_IDX = {(0, 0): 0, (0, 1): 1, (1, 0): 2, (1, 1): 3}


class SLq2:
    """Normal-form arithmetic in SL_q(2); elements are dicts exps -> Scalar."""

    def __init__(self, p: CalcParams):
        if p.N != 2:
            raise ValueError("SL_q(2) oracle needs N = 2")
        self.p = p
        self.ring = p.ring
        self.q = p.q
        self.rules = self._derive_rules()
        self.antipode = self._derive_antipode()

    # words are tuples of generator indices 0..3
    def _derive_rules(self) -> dict:
        """Rewrite rule for every descending pair (y, x), y > x."""
        R, _ = rhat(2, self.q)
        ring = self.ring
        rels = []
        for a, b, c, d in itertools.product(range(2), repeat=4):
            terms: dict = {}
            for (row, col), v in R.entries.items():
                if row == a * 2 + b:
                    e, f = divmod(col, 2)
                    vec_axpy(terms, v, {(_IDX[(e, c)], _IDX[(f, d)]): ring.one})
                if col == c * 2 + d:
                    e, f = divmod(row, 2)
                    vec_axpy(terms, -v, {(_IDX[(a, e)], _IDX[(b, f)]): ring.one})
            if terms:
                rels.append(terms)
        # solve for the descending words in terms of ascending ones
        pairs = list(itertools.product(range(4), repeat=2))
        desc = [w for w in pairs if w[0] > w[1]]
        order = desc + [w for w in pairs if w[0] <= w[1]]
        col = {w: i for i, w in enumerate(order)}
        bld = EchelonBuilder(len(order), ring)
        for r in rels:
            bld.add({col[w]: v for w, v in r.items()})
        sub = bld.freeze()
        rules = {}
        for row in sub.basis:
            piv = min(row)
            if piv >= len(desc):
                raise RuntimeError("relation among ordered words")
            if any(c < len(desc) for c in row if c != piv):
                raise RuntimeError("descending words not independently solvable")
            rules[order[piv]] = {order[c]: -v for c, v in row.items() if c != piv}
        if len(rules) != len(desc):
            raise RuntimeError("missing straightening rule")
        return rules

    def _derive_antipode(self) -> dict:
        """S(u^i_j) as normal-form elements, checked by u S(u) = S(u) u = I."""
        q, ring = self.q, self.ring
        cand = {
            (0, 0): {(0, 0, 0, 1): ring.one},
            (1, 1): {(1, 0, 0, 0): ring.one},
            (0, 1): {(0, 1, 0, 0): -q.inverse()},
            (1, 0): {(0, 0, 1, 0): -q},
        }
        for i, j in itertools.product(range(2), repeat=2):
            for left in (True, False):
                acc: dict = {}
                for k in range(2):
                    # u^i_k S(u^k_j) and S(u^i_k) u^k_j
                    if left:
                        prod = self.mul(self.gen((i, k)), cand[(k, j)])
                    else:
                        prod = self.mul(cand[(i, k)], self.gen((k, j)))
                    vec_axpy(acc, ring.one, prod)
                want = {(0, 0, 0, 0): ring.one} if i == j else {}
                if acc != want:
                    raise RuntimeError("antipode candidate fails")
        return cand

    def gen(self, ij) -> dict:
        e = [0, 0, 0, 0]
        e[_IDX[ij]] = 1
        return {tuple(e): self.ring.one}

    @lru_cache(maxsize=None)
    def _normal_word(self, word: tuple) -> tuple:
        """Normal form of a word, as a tuple of (exps, coeff)."""
        for pos in range(len(word) - 1):
            y, x = word[pos], word[pos + 1]
            if y > x:
                out: dict = {}
                for w, c in self.rules[(y, x)].items():
                    for e, v in self._normal_word(word[:pos] + w + word[pos + 2:]):
                        vec_axpy(out, c * v, {e: self.ring.one})
                return tuple(out.items())
        exps = tuple(word.count(g) for g in range(4))
        if exps[0] and exps[3]:
            # a^i b^j c^k d^l: move the last a next to the first d, then ad = 1 + q bc
            i, j, k, l = exps
            f = self._commute_factor(j, k)
            base = (0,) * (i - 1) + (1,) * j + (2,) * k
            tail = (3,) * (l - 1)
            out = {}
            for e, v in self._normal_word(base + tail):
                vec_axpy(out, f * v, {e: self.ring.one})
            for e, v in self._normal_word(base + (1, 2) + tail):
                vec_axpy(out, f * self.q * v, {e: self.ring.one})
            return tuple(out.items())
        return ((exps, self.ring.one),)

    @lru_cache(maxsize=None)
    def _commute_factor(self, j: int, k: int):
        """lambda with a b^j c^k = lambda b^j c^k a."""
        # from the rules b a = beta a b and c a = gamma a c
        beta = self._monomial_rule((1, 0))
        gamma = self._monomial_rule((2, 0))
        return (beta ** j * gamma ** k).inverse()

    def _monomial_rule(self, pair):
        r = self.rules[pair]
        if len(r) != 1 or (pair[1], pair[0]) not in r:
            raise RuntimeError("expected a q-commutation rule")
        return r[(pair[1], pair[0])]

    def normal(self, word: tuple) -> dict:
        return dict(self._normal_word(tuple(word)))

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for e1, c1 in x.items():
            w1 = sum(((g,) * n for g, n in enumerate(e1)), ())
            for e2, c2 in y.items():
                w2 = sum(((g,) * n for g, n in enumerate(e2)), ())
                vec_axpy(out, c1 * c2, self.normal(w1 + w2))
        return out

    def coaction_coeff(self, m: int, n: int, a: int, b: int) -> dict:
        """v^{(mn)}_{(ab)} = S(u^a_m) u^n_b."""
        return self.mul(self.antipode[(a, m)], self.gen((n, b)))


def coinvariant_dim(p: CalcParams, k: int) -> int:
    """dim of {x in Gamma_l^(x)k : Delta_R x = x (x) 1}, solved in SL_q(2)."""
    alg = SLq2(p)
    N = 2
    dim = N * N
    letters = [divmod(a, N) for a in range(dim)]
    coeff = {(M, A): alg.coaction_coeff(*letters[M], *letters[A]) for M in range(dim) for A in range(dim)}
    D = dim ** k
    # unknowns c_A; equations indexed by (M, monomial)
    eqs: dict = {}
    one = (0, 0, 0, 0)
    for A in range(D):
        Aw = [(A // dim ** (k - 1 - l)) % dim for l in range(k)]
        for M in range(D):
            Mw = [(M // dim ** (k - 1 - l)) % dim for l in range(k)]
            prod = {one: p.ring.one}
            for ml, al in zip(Mw, Aw):
                prod = alg.mul(prod, coeff[(ml, al)])
                if not prod:
                    break
            if M == A:
                vec_axpy(prod, -p.ring.one, {one: p.ring.one})
            for e, v in prod.items():
                eqs.setdefault((M, e), {})[A] = v
    rows = list(eqs.values())
    mat = SparseMat(len(rows), D, p.ring, dict(enumerate(rows)))
    return rank_kernel(mat).kernel.dim
