"""Braid machinery: permutations and shuffles, the braiding sigma on
Gamma_l (x) Gamma_l, the antisymmetrizers A_k and the quotient algebra
Lambda_w = tensor algebra / (sum of ker A_k).

Slots are numbered from 1 (leftmost tensor factor).  ``sigma_i`` acts on
slots i, i+1.  A reduced word ``s_{i1} ... s_{ir}`` of a permutation (as a
composition of functions on positions) is lifted to the operator
``sigma_{i1} o ... o sigma_{ir}``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence

import numpy as np

from .exactla import (
    EchelonBuilder,
    Modular,
    ResourceLimitError,
    SparseMat,
    Subspace,
    rank_kernel,
    parallel_map,
    random_prime,
    rref_mod_p,
    vec_axpy,
)
from .forms import TensorForm, decode, encode
from .qgroup import CalcParams, func_table, triangle_action, u_letter
from .scalars import Scalar, SpecializationError

__all__ = [
    "ConventionMismatchError",
    "ExactKernelRequired",
    "EXACT_CEILING",
    "Perm",
    "all_perms",
    "reduced_word",
    "perm_length",
    "shuffles",
    "braiding",
    "nu1",
    "apply_slot",
    "apply_word",
    "Antisymmetrizer",
    "antisymmetrizer",
    "antisymmetrizer_matrix",
    "direct_signed_sum",
    "shuffle_sum_matrix",
    "lambda_dim",
    "image_basis",
    "LambdaQuotient",
    "quotient_reduce",
    "product_in_lambda",
    "weight",
]

# exact-mode ceiling on the tensor dimension N^(2k)
EXACT_CEILING = 4096
MAX_ENUM_K = 8


class ConventionMismatchError(RuntimeError):
    def __init__(self, detail: str = ""):
        super().__init__("convention mismatch" + (f": {detail}" if detail else ""))


class ExactKernelRequired(RuntimeError):
    def __init__(self, msg: str = "exact kernel required"):
        super().__init__(msg)


# -- permutations ----------------------------------------------------------------

Perm = tuple  # one-line notation on positions 0..k-1


def perm_length(p: Perm) -> int:
    return sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])


def reduced_word(p: Perm) -> list[int]:
    """Reduced word [i1, ..., ir] (1-based) with p = s_i1 o ... o s_ir."""
    p = list(p)
    word: list[int] = []
    while True:
        for m in range(len(p) - 1):
            if p[m] > p[m + 1]:
                # p = p' o s_{m+1} with l(p') = l(p) - 1
                p[m], p[m + 1] = p[m + 1], p[m]
                word.append(m + 1)
                break
        else:
            break
    word.reverse()
    return word


def compose(a: Perm, b: Perm) -> Perm:
    return tuple(a[b[i]] for i in range(len(a)))


def from_word(word: Sequence[int], k: int) -> Perm:
    p = tuple(range(k))
    for i in word:
        s = list(range(k))
        s[i - 1], s[i] = s[i], s[i - 1]
        p = compose(p, tuple(s))
    return p


def all_perms(k: int) -> Iterator[tuple[Perm, int]]:
    if k > MAX_ENUM_K:
        raise ResourceLimitError(f"k={k} too large for full enumeration")
    for p in itertools.permutations(range(k)):
        yield p, perm_length(p)


def shuffles(k: int, i: int) -> list[Perm]:
    """C_{ki}: p increasing on positions 1..i and on i+1..k."""
    out = []
    for first in itertools.combinations(range(k), i):
        rest = [x for x in range(k) if x not in first]
        out.append(tuple(first) + tuple(rest))
    return out


def shuffle_decomposition(p: Perm, i: int) -> tuple[Perm, Perm, Perm]:
    """p = p1 p2 p3 with p1 in C_{ki}, p2 fixing i+1..k, p3 fixing 1..i."""
    k = len(p)
    first = sorted(p[:i])
    rest = sorted(p[i:])
    p1 = tuple(first) + tuple(rest)
    inv1 = [0] * k
    for pos, v in enumerate(p1):
        inv1[v] = pos
    h = tuple(inv1[p[x]] for x in range(k))
    p2 = tuple(h[:i]) + tuple(range(i, k))
    p3 = tuple(range(i)) + tuple(h[i:])
    return p1, p2, p3


# -- braiding ---------------------------------------------------------------------


def nu1(p: CalcParams) -> TensorForm:
    N = p.N
    return TensorForm(N, 1, p.ring, {i * N + i: p.q ** (-2 * (i + 1)) for i in range(N)})


def weight(letters: Sequence[int], N: int) -> tuple[int, ...]:
    """Torus weight of nu^{i1}_{j1} ... : sum of e_j - e_i."""
    w = [0] * N
    for a in letters:
        i, j = divmod(a, N)
        w[j] += 1
        w[i] -= 1
    return tuple(w)


@lru_cache(maxsize=None)
def _sigma_raw(p: CalcParams) -> SparseMat:
    tab = func_table(p)
    N = p.N
    dim = N * N
    ent: dict[tuple[int, int], Scalar] = {}
    # sigma(nu_a (x) nu_b) = sum_{c,e} f^a_e(v^c_b) nu_c (x) nu_e,
    # v^{(m,n)}_{(i,j)} = S(u^i_m) u^n_j
    for b in range(dim):
        i, j = divmod(b, N)
        for c in range(dim):
            m, n = divmod(c, N)
            fv = tab.f_s[(i, m)] @ tab.f_u[(n, j)]
            for a, row in fv.row_items():
                for e, v in row.items():
                    ent[(c * dim + e, a * dim + b)] = v
    return SparseMat.from_entries(dim * dim, dim * dim, p.ring, ent)


@lru_cache(maxsize=None)
def _sigma_cols(p: CalcParams) -> dict:
    return {c: list(col.items()) for c, col in enumerate(_sigma_raw(p).columns()) if col}


def apply_slot(vec: dict, cols: dict, slot: int, k: int, dim: int) -> dict:
    """Apply a two-slot operator (given by its columns) at slots slot, slot+1 (1-based)."""
    lo = dim ** (k - slot - 1)
    mid = dim * dim
    out: dict = {}
    for idx, v in vec.items():
        high, rem = divmod(idx, mid * lo)
        pair, low = divmod(rem, lo)
        col = cols.get(pair)
        if not col:
            continue
        base = high * mid * lo + low
        for pr, c in col:
            key = base + pr * lo
            val = v * c
            w = out.get(key)
            if w is None:
                out[key] = val
            else:
                w = w + val
                if w:
                    out[key] = w
                else:
                    del out[key]
    return out


def apply_word(vec: dict, cols: dict, word: Sequence[int], k: int, dim: int) -> dict:
    """sigma_{i1} o ... o sigma_{ir} applied to vec (rightmost first)."""
    for i in reversed(word):
        vec = apply_slot(vec, cols, i, k, dim)
    return vec


def braiding(p: CalcParams, validate: bool = True) -> SparseMat:
    """Matrix of sigma on the nu-basis of Gamma_l (x) Gamma_l (column = input)."""
    sig = _sigma_raw(p)
    if validate:
        _validate_sigma(p)
    return sig


@lru_cache(maxsize=None)
def _validate_sigma(p: CalcParams) -> None:
    N = p.N
    dim = N * N
    cols = _sigma_cols(p)
    n1 = nu1(p)
    # sigma(x (x) nu1) = nu1 (x) x
    for a in range(dim):
        x = TensorForm.nu(N, p.ring, a // N, a % N)
        lhs = apply_slot(x.tensor(n1).coeffs, cols, 1, 2, dim)
        if lhs != n1.tensor(x).coeffs:
            raise ConventionMismatchError("sigma(x (x) nu1) != nu1 (x) x")
    # braid equation on three slots
    for idx in range(dim ** 3):
        v = {idx: p.ring.one}
        l = apply_word(v, cols, [1, 2, 1], 3, dim)
        r = apply_word(v, cols, [2, 1, 2], 3, dim)
        if l != r:
            raise ConventionMismatchError("braid equation fails")


# -- antisymmetrizers -------------------------------------------------------------


class Antisymmetrizer:
    """A_k = A_{k,1} (I (x) A_{k-1}) applied to sparse vectors."""

    def __init__(self, p: CalcParams):
        self.p = p
        self.N = p.N
        self.dim = p.N * p.N
        self.cols = _sigma_cols(p)

    def shuffle1(self, vec: dict, k: int) -> dict:
        """A_{k,1} = sum_j (-1)^j sigma_j ... sigma_1."""
        out = dict(vec)
        w = vec
        for j in range(1, k):
            w = apply_slot(w, self.cols, j, k, self.dim)
            if not w:
                break
            vec_axpy(out, self.p.ring.one if j % 2 == 0 else -self.p.ring.one, w)
        return out

    def apply(self, vec: dict, k: int) -> dict:
        if k <= 1 or not vec:
            return dict(vec)
        lo = self.dim ** (k - 1)
        groups: dict[int, dict] = {}
        for idx, v in vec.items():
            a, rest = divmod(idx, lo)
            groups.setdefault(a, {})[rest] = v
        inner: dict = {}
        for a, sub in groups.items():
            res = self.apply(sub, k - 1)
            base = a * lo
            for r, v in res.items():
                inner[base + r] = v
        return self.shuffle1(inner, k)

    def form(self, x: TensorForm) -> TensorForm:
        return TensorForm(x.N, x.degree, x.ring, self.apply(x.coeffs, x.degree))

    def kills(self, x: TensorForm) -> bool:
        return not self.apply(x.coeffs, x.degree)


@lru_cache(maxsize=None)
def antisymmetrizer(p: CalcParams) -> Antisymmetrizer:
    braiding(p)
    return Antisymmetrizer(p)


def _check_exact(p: CalcParams, k: int):
    if (p.N * p.N) ** k > EXACT_CEILING:
        raise ResourceLimitError(f"N^(2k) = {(p.N * p.N) ** k} above exact ceiling {EXACT_CEILING}")


@lru_cache(maxsize=None)
def antisymmetrizer_matrix(p: CalcParams, k: int) -> SparseMat:
    """Explicit matrix of A_k (exact, within the exact ceiling)."""
    _check_exact(p, k)
    dim = p.N * p.N
    D = dim ** k
    if k <= 1:
        return SparseMat.identity(D, p.ring)
    A = antisymmetrizer(p)
    prev = antisymmetrizer_matrix(p, k - 1).columns()
    lo = dim ** (k - 1)
    cols = []
    for idx in range(D):
        a, rest = divmod(idx, lo)
        inner = {a * lo + r: v for r, v in prev[rest].items()}
        cols.append(A.shuffle1(inner, k))
    return SparseMat.from_columns(D, cols, p.ring)


def _word_matrix(p: CalcParams, word: Sequence[int], k: int) -> SparseMat:
    dim = p.N * p.N
    D = dim ** k
    cols = _sigma_cols(p)
    return SparseMat.from_columns(D, [apply_word({i: p.ring.one}, cols, word, k, dim) for i in range(D)], p.ring)


def direct_signed_sum(p: CalcParams, k: int) -> SparseMat:
    """Oracle: sum over S_k of (-1)^l(w) sigma(b_w), built from reduced words."""
    _check_exact(p, k)
    dim = p.N * p.N
    D = dim ** k
    cols = _sigma_cols(p)
    out = [dict() for _ in range(D)]
    for perm, length in all_perms(k):
        word = reduced_word(perm)
        sign = p.ring.one if length % 2 == 0 else -p.ring.one
        for i in range(D):
            vec_axpy(out[i], sign, apply_word({i: p.ring.one}, cols, word, k, dim))
    return SparseMat.from_columns(D, out, p.ring)


def shuffle_sum_matrix(p: CalcParams, k: int, i: int) -> SparseMat:
    """A_{ki} = sum over C_{ki} of (-1)^l sigma(b_c)."""
    _check_exact(p, k)
    dim = p.N * p.N
    D = dim ** k
    cols = _sigma_cols(p)
    out = [dict() for _ in range(D)]
    for c in shuffles(k, i):
        word = reduced_word(c)
        sign = p.ring.one if len(word) % 2 == 0 else -p.ring.one
        for idx in range(D):
            vec_axpy(out[idx], sign, apply_word({idx: p.ring.one}, cols, word, k, dim))
    return SparseMat.from_columns(D, out, p.ring)


def kron_blocks(A: SparseMat, B: SparseMat) -> SparseMat:
    return A.kron(B)


# -- ranks ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def image_basis(p: CalcParams, k: int) -> Subspace:
    """Exact RREF basis of im A_k = A_{k,1}(V (x) im A_{k-1})."""
    _check_exact(p, k)
    dim = p.N * p.N
    if k == 0:
        return Subspace(1, p.ring, [{0: p.ring.one}])
    if k == 1:
        return Subspace(dim, p.ring, [{a: p.ring.one} for a in range(dim)], _trusted=True)
    prev = image_basis(p, k - 1)
    A = antisymmetrizer(p)
    lo = dim ** (k - 1)
    bld = EchelonBuilder(dim ** k, p.ring)
    for a in range(dim):
        for row in prev.basis:
            v = {a * lo + r: c for r, c in row.items()}
            bld.add(A.shuffle1(v, k))
    return bld.freeze()


def _sigma_mod(p: CalcParams, point: dict, prime: int) -> np.ndarray:
    return _sigma_raw(p).specialize(point, prime)


def _slot_mod(X: np.ndarray, sig: np.ndarray, slot: int, k: int, dim: int, prime: int) -> np.ndarray:
    """Apply sigma at slot (1-based) to each row of X (rows are vectors) mod prime."""
    m = X.shape[0]
    left = dim ** (slot - 1)
    right = dim ** (k - slot - 1)
    Y = X.reshape(m * left, dim * dim, right).transpose(0, 2, 1).reshape(-1, dim * dim)
    sT = sig.T  # row vector y = x sigma^T
    lo = sT & 0xFFFF
    hi = sT >> 16
    out = (Y @ lo) % prime
    out = (out + ((Y @ hi) % prime) * 65536) % prime
    return out.reshape(m * left, right, dim * dim).transpose(0, 2, 1).reshape(m, -1)


def _modular_image(X: np.ndarray, sig: np.ndarray, k: int, dim: int, prime: int) -> np.ndarray:
    """Rows of X mapped by A_k modulo prime, via A_k = A_{k,1} (I (x) A_{k-1})."""
    if k <= 1:
        return X % prime
    m = X.shape[0]
    inner = _modular_image(X.reshape(m * dim, -1), sig, k - 1, dim, prime).reshape(m, -1)
    out = inner.copy()
    w = inner
    for j in range(1, k):
        w = _slot_mod(w, sig, j, k, dim, prime)
        out = (out + (w if j % 2 == 0 else prime - w)) % prime
    return out


def _modular_ranks(p: CalcParams, k_max: int, point: dict, prime: int) -> list[int]:
    dim = p.N * p.N
    sig = _sigma_mod(p, point, prime)
    ranks = [1, dim]
    img = np.eye(dim, dtype=np.int64)
    for k in range(2, k_max + 1):
        r = img.shape[0]
        lo = dim ** (k - 1)
        X = np.zeros((dim * r, dim * lo), dtype=np.int64)
        for a in range(dim):
            X[a * r:(a + 1) * r, a * lo:(a + 1) * lo] = img
        out = X.copy()
        w = X
        for j in range(1, k):
            w = _slot_mod(w, sig, j, k, dim, prime)
            out = (out + (w if j % 2 == 0 else prime - w)) % prime
        red, piv = rref_mod_p(out, prime)
        img = red
        ranks.append(red.shape[0])
        if red.shape[0] == 0:
            ranks.extend([0] * (k_max - k))
            break
    return ranks[: k_max + 1]


@dataclass
class DimTable:
    dims: list[int]
    certificates: list[str]
    sample_ranks: list[list[int]] = field(default_factory=list)


def lambda_dim(p: CalcParams, k: int, mode="exact") -> tuple[int, str]:
    """dim of the degree-k left-invariant part of Lambda_w (= rank A_k)."""
    if mode == "exact":
        return image_basis(p, k).dim, "exact"
    if isinstance(mode, Modular):
        ranks = modular_rank_samples(p, k, mode)
        cert = "probabilistic-lower-bound-agreed" if len(set(ranks)) == 1 else "probabilistic-lower-bound"
        return max(ranks), cert
    raise ValueError(f"unknown mode {mode!r}")


def draw_sample_points(p: CalcParams, mode: Modular) -> list[tuple[dict, int]]:
    """Deterministic (point, prime) pairs at which sigma specializes."""
    if mode.samples < 2:
        raise ValueError("modular mode needs at least 2 samples")
    rng = random.Random(mode.seed)
    out = []
    tries = 0
    while len(out) < mode.samples:
        prime = random_prime(rng)
        point = {n: rng.randrange(2, prime - 1) for n in p.ring.names}
        try:
            _sigma_mod(p, point, prime)
        except SpecializationError:
            tries += 1
            if tries > 20:
                raise
            continue
        out.append((point, prime))
    return out


def modular_rank_samples(p: CalcParams, k: int, mode: Modular) -> list[int]:
    pts = draw_sample_points(p, mode)
    return parallel_map(lambda pp: _modular_ranks(p, k, pp[0], pp[1])[k], pts)


# -- quotient normal forms -------------------------------------------------------------


class LambdaQuotient:
    """Normal forms in degree k of Lambda_w.

    The section is spanned by the coordinates that are *not* pivots of the
    RREF kernel basis of A_k (lexicographic order).  Equivalently it is the
    greedy-from-the-right column basis of A_k, which is how it is computed:
    the normal form of x is the unique y supported there with A_k y = A_k x.
    """

    def __init__(self, p: CalcParams, k: int):
        _check_exact(p, k)
        self.p = p
        self.k = k
        self.D = (p.N * p.N) ** k
        self.A = antisymmetrizer(p)
        self.rank = image_basis(p, k).dim
        self._bld = EchelonBuilder(2 * self.D, p.ring)
        self.section: list[int] = []
        one = p.ring.one
        j = self.D - 1
        while len(self.section) < self.rank and j >= 0:
            col = self.A.apply({j: one}, k)
            if col:
                aug = dict(col)
                aug[self.D + j] = one
                r = self._bld.reduce(aug)
                if any(c < self.D for c in r):
                    self._bld.add(aug)
                    self.section.append(j)
            j -= 1
        self.section.sort()

    def reduce_vec(self, vec: dict) -> dict:
        img = self.A.apply(vec, self.k)
        r = self._bld.reduce(img)
        if any(c < self.D for c in r):
            raise RuntimeError("image not in span of section columns")
        # img - sum y_j A e_j reduces to 0 with marker part -y
        return {c - self.D: -v for c, v in r.items()}

    def reduce(self, x: TensorForm) -> TensorForm:
        if x.degree != self.k:
            raise ValueError("degree mismatch")
        return TensorForm(x.N, x.degree, x.ring, self.reduce_vec(x.coeffs))


@lru_cache(maxsize=None)
def _quotient(p: CalcParams, k: int) -> LambdaQuotient:
    return LambdaQuotient(p, k)


def quotient_reduce(p: CalcParams, k: int, x: TensorForm) -> TensorForm:
    if (p.N * p.N) ** k > EXACT_CEILING:
        raise ExactKernelRequired()
    return _quotient(p, k).reduce(x)


def product_in_lambda(p: CalcParams, x: TensorForm, y: TensorForm) -> TensorForm:
    return quotient_reduce(p, x.degree + y.degree, x.tensor(y))
