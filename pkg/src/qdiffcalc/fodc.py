"""First-order calculus layer: words in the generators, counit, the maps
omega and S, the truncated right ideal R = ker(eps) & ker(omega), the
Ad-invariant elements W+-, the constants f_2, f_11 and the tensor-level
differential.

Elements of the coordinate algebra are kept as linear combinations of free
words in the ``u^i_j``.  Every map used here factors through the defining
relations, so free representatives are safe.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

from .braidext import nu1
from .exactla import EchelonBuilder, LIMITS, ResourceLimitError, SparseMat, Subspace, rank_kernel, vec_axpy
from .forms import TensorForm
from .qgroup import CalcParams, hecke_projectors, rhat, structure_constants, triangle_action, u_letter
from .scalars import Scalar

__all__ = [
    "FreeElem",
    "counit",
    "omega_map",
    "omega_direct",
    "omega_gen",
    "s_map",
    "r_ideal_truncated",
    "RIdeal",
    "w_elements",
    "WElements",
    "VMinusVanishes",
    "f_constants",
    "FConstants",
    "closed_form_constants",
    "basis_transform",
    "differential",
    "omega1",
    "omega2",
    "rtt_relations",
    "quantum_det",
    "sl2_gen",
]

Word = tuple  # tuple of (i, j) pairs, 0-based


class FreeElem:
    """Linear combination of words in the generators u^i_j."""

    __slots__ = ("N", "ring", "terms")

    def __init__(self, N: int, ring, terms: Mapping[Word, Scalar] | None = None):
        self.N = N
        self.ring = ring
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def one(cls, N, ring):
        return cls(N, ring, {(): ring.one})

    @classmethod
    def gen(cls, N, ring, i, j):
        return cls(N, ring, {((i, j),): ring.one})

    @classmethod
    def word(cls, N, ring, pairs: Iterable[tuple[int, int]], coeff=None):
        return cls(N, ring, {tuple(pairs): ring.one if coeff is None else ring(coeff)})

    def __add__(self, other: "FreeElem") -> "FreeElem":
        out = dict(self.terms)
        vec_axpy(out, self.ring.one, other.terms)
        return FreeElem(self.N, self.ring, out)

    def __neg__(self):
        return FreeElem(self.N, self.ring, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, FreeElem):
            out: dict = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    vec_axpy(out, c1 * c2, {w1 + w2: self.ring.one})
            return FreeElem(self.N, self.ring, out)
        c = self.ring(other)
        return FreeElem(self.N, self.ring, {w: c * v for w, v in self.terms.items()})

    def __rmul__(self, c):
        return self * c

    def __pow__(self, e: int):
        out = FreeElem.one(self.N, self.ring)
        for _ in range(e):
            out = out * self
        return out

    def bar(self) -> "FreeElem":
        """a - eps(a)."""
        return self - FreeElem.one(self.N, self.ring) * counit(self)

    def max_length(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, FreeElem):
            return NotImplemented
        return self.N == other.N and self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        parts = [f"({c})" + ("*".join(f"u{i + 1}{j + 1}" for i, j in w) or "1") for w, c in sorted(self.terms.items())[:6]]
        return "FreeElem(" + (" + ".join(parts) or "0") + (" + ..." if len(self.terms) > 6 else "") + ")"


def sl2_gen(p: CalcParams, name: str) -> FreeElem:
    """a, b, c, d of SL_q(2) as generators u^1_1, u^1_2, u^2_1, u^2_2."""
    i, j = {"a": (0, 0), "b": (0, 1), "c": (1, 0), "d": (1, 1)}[name]
    return FreeElem.gen(p.N, p.ring, i, j)


# -- counit, omega ---------------------------------------------------------------


def _eps_word(w: Word) -> int:
    return 1 if all(i == j for i, j in w) else 0


def counit(a: FreeElem) -> Scalar:
    acc = a.ring.zero
    for w, c in a.terms.items():
        if _eps_word(w):
            acc = acc + c
    return acc


@lru_cache(maxsize=None)
def omega_gen(p: CalcParams) -> dict:
    """omega^i_j = z r nu^i_j + (z - 1) delta^i_j nu_1, keyed by (i, j)."""
    sc = structure_constants(p)
    N = p.N
    zr = sc.z * sc.r_tau
    n1 = nu1(p).coeffs
    out = {}
    for i in range(N):
        for j in range(N):
            vec = {i * N + j: zr}
            if i == j:
                vec_axpy(vec, sc.z - 1, n1)
            out[(i, j)] = vec
    return out


_OMEGA_CACHE: dict = {}


def _omega_word(p: CalcParams, w: Word) -> dict:
    """omega(w) by omega(ab) = omega(a) |> b + eps(a) omega(b)."""
    key = (p, w)
    hit = _OMEGA_CACHE.get(key)
    if hit is not None:
        return hit
    if not w:
        res: dict = {}
    elif len(w) == 1:
        res = omega_gen(p)[w[0]]
    else:
        head, rest = w[0], w[1:]
        first = TensorForm(p.N, 1, p.ring, omega_gen(p)[head])
        res = dict(triangle_action(p, first, [u_letter(*x) for x in rest]).coeffs)
        if head[0] == head[1]:
            vec_axpy(res, p.ring.one, _omega_word(p, rest))
    _OMEGA_CACHE[key] = res
    return res


def omega_map(p: CalcParams, a: FreeElem) -> TensorForm:
    out: dict = {}
    for w, c in a.terms.items():
        vec_axpy(out, c, _omega_word(p, w))
    return TensorForm(p.N, 1, p.ring, out)


def omega_direct(p: CalcParams, a: FreeElem) -> TensorForm:
    """Oracle: omega(a) = nu_1 |> a - eps(a) nu_1, from d a = nu_1 a - a nu_1."""
    n1 = nu1(p)
    out: dict = {}
    for w, c in a.terms.items():
        vec_axpy(out, c, triangle_action(p, n1, [u_letter(*x) for x in w]).coeffs)
    vec_axpy(out, -counit(a), n1.coeffs)
    return TensorForm(p.N, 1, p.ring, out)


def _s_word(p: CalcParams, w: Word) -> dict:
    dim = p.N * p.N
    out: dict = {}
    for mids in itertools.product(range(p.N), repeat=len(w)):
        left = tuple((i, m) for (i, _), m in zip(w, mids))
        right = tuple((m, j) for (_, j), m in zip(w, mids))
        L = _omega_word(p, left)
        if not L:
            continue
        R = _omega_word(p, right)
        for a, v in L.items():
            for b, x in R.items():
                vec_axpy(out, v * x, {a * dim + b: p.ring.one})
    return out


def s_map(p: CalcParams, a: FreeElem) -> TensorForm:
    """S(a) = sum omega(a_(1)) (x) omega(a_(2))."""
    out: dict = {}
    for w, c in a.terms.items():
        vec_axpy(out, c, _s_word(p, w))
    return TensorForm(p.N, 2, p.ring, out)


def omega1(p: CalcParams) -> TensorForm:
    """omega_1 = sum_i q^(-2i) omega^i_i."""
    N = p.N
    out: dict = {}
    for i in range(N):
        vec_axpy(out, p.q ** (-2 * (i + 1)), omega_gen(p)[(i, i)])
    return TensorForm(N, 1, p.ring, out)


def omega2(p: CalcParams) -> TensorForm:
    """omega_2 = sum_{i,n} q^(-2i) omega^i_n (x) omega^n_i."""
    N = p.N
    og = omega_gen(p)
    out = TensorForm.zero(N, 2, p.ring)
    for i in range(N):
        for n in range(N):
            a = TensorForm(N, 1, p.ring, og[(i, n)])
            b = TensorForm(N, 1, p.ring, og[(n, i)])
            out = out + (a @ b) * p.q ** (-2 * (i + 1))
    return out


# -- relations --------------------------------------------------------------------


def rtt_relations(p: CalcParams) -> list[FreeElem]:
    """Entries of R u_1 u_2 - u_1 u_2 R as free elements."""
    N = p.N
    R, _ = rhat(N, p.q)
    out = []
    # (R u1 u2)[(a,b),(c,d)] = sum R[(a,b),(e,f)] u^e_c u^f_d
    # (u1 u2 R)[(a,b),(c,d)] = sum u^a_e u^b_f R[(e,f),(c,d)]
    for a, b, c, d in itertools.product(range(N), repeat=4):
        terms: dict = {}
        for (row, col), v in R.entries.items():
            if row == a * N + b:
                e, f = divmod(col, N)
                vec_axpy(terms, v, {((e, c), (f, d)): p.ring.one})
            if col == c * N + d:
                e, f = divmod(row, N)
                vec_axpy(terms, -v, {((a, e), (b, f)): p.ring.one})
        if terms:
            out.append(FreeElem(N, p.ring, terms))
    return out


def quantum_det(p: CalcParams) -> FreeElem:
    """sum_pi (-q)^l(pi) u^1_pi(1) ... u^N_pi(N)."""
    N = p.N
    terms: dict = {}
    mq = -p.q
    for perm in itertools.permutations(range(N)):
        inv = sum(1 for x in range(N) for y in range(x + 1, N) if perm[x] > perm[y])
        terms[tuple((i, perm[i]) for i in range(N))] = mq ** inv
    return FreeElem(N, p.ring, terms)


# -- the truncated right ideal ------------------------------------------------------


@dataclass
class RIdeal:
    D: int
    words: list
    R_D: Subspace
    S_span: Subspace


def _all_words(N: int, D: int) -> list[Word]:
    gens = [(i, j) for i in range(N) for j in range(N)]
    words: list[Word] = [()]
    for n in range(1, D + 1):
        words.extend(itertools.product(gens, repeat=n))
    return words


def r_ideal_truncated(p: CalcParams, D: int) -> RIdeal:
    """R_D = ker eps & ker omega on words of length <= D, and S(R_D)."""
    if D < 1:
        raise ValueError("D must be at least 1")
    dim = p.N * p.N
    nwords = sum(dim ** n for n in range(D + 1))
    if nwords * (dim + 1) > LIMITS["exact"]:
        raise ResourceLimitError(f"{nwords} words above limit")
    words = _all_words(p.N, D)
    # constraint matrix: row 0 = eps, rows 1.. = omega coordinates
    ent = {}
    for c, w in enumerate(words):
        if _eps_word(w):
            ent[(0, c)] = p.ring.one
        for a, v in _omega_word(p, w).items():
            ent[(1 + a, c)] = v
    M = SparseMat.from_entries(1 + dim, len(words), p.ring, ent)
    R_D = rank_kernel(M).kernel
    bld = EchelonBuilder(dim * dim, p.ring)
    s_cache: dict[int, dict] = {}
    for row in R_D.basis:
        vec: dict = {}
        for c, v in row.items():
            sw = s_cache.get(c)
            if sw is None:
                sw = s_cache[c] = _s_word(p, words[c])
            vec_axpy(vec, v, sw)
        if vec:
            bld.add(vec)
    return RIdeal(D, words, R_D, bld.freeze())


# -- W+- and the f-constants ------------------------------------------------------------


class VMinusVanishes(ValueError):
    def __init__(self, msg: str = "V-minus vanishes"):
        super().__init__(msg)


@dataclass
class WElements:
    W_plus: FreeElem
    W_minus: FreeElem | None
    mu_plus: Scalar
    mu_minus: Scalar | None


def _v_elem(p: CalcParams, P: SparseMat) -> FreeElem:
    # V = q^(-2j-2i) P^{ji}_{mn} u^m_j u^n_i (1-based i, j in the weights)
    N = p.N
    terms: dict = {}
    for (row, col), v in P.entries.items():
        j, i = divmod(row, N)
        m, n = divmod(col, N)
        vec_axpy(terms, v * p.q ** (-2 * (i + 1) - 2 * (j + 1)), {((m, j), (n, i)): p.ring.one})
    return FreeElem(N, p.ring, terms)


def u_elem(p: CalcParams) -> FreeElem:
    """U = sum_i q^(-2i) u^i_i."""
    return FreeElem(p.N, p.ring, {((i, i),): p.q ** (-2 * (i + 1)) for i in range(p.N)})


def _proportionality(x: Mapping, y: Mapping):
    """c with x = c*y, or None."""
    if not y:
        return None
    k0 = min(y)
    c = x.get(k0, y[k0].ring.zero) / y[k0]
    diff = dict(x)
    vec_axpy(diff, -c, y)
    return None if diff else c


def _w_from_v(p: CalcParams, V: FreeElem, U: FreeElem) -> tuple[FreeElem, Scalar]:
    om_v = omega_map(p, V).coeffs
    if not om_v and not s_map(p, V).coeffs:
        raise VMinusVanishes()
    mu = _proportionality(om_v, omega_map(p, U).coeffs)
    if mu is None:
        raise ArithmeticError("omega(V) is not a multiple of nu_1")
    return V.bar() - U.bar() * mu, mu


@lru_cache(maxsize=None)
def w_elements(p: CalcParams, want_minus: bool | None = None) -> WElements:
    """W+- = bar V+- - mu+- bar U with mu+- solved from omega(W+-) = 0.

    For N = 2 only W+ exists; asking for W- explicitly raises VMinusVanishes.
    """
    Pp, Pm = hecke_projectors(p.N, p.q)
    U = u_elem(p)
    Wp, mup = _w_from_v(p, _v_elem(p, Pp), U)
    if want_minus is None:
        want_minus = p.N >= 3
    Wm = mum = None
    if want_minus:
        Wm, mum = _w_from_v(p, _v_elem(p, Pm), U)
    return WElements(Wp, Wm, mup, mum)


@dataclass
class FConstants:
    f2_plus: Scalar
    f11_plus: Scalar
    f2_minus: Scalar | None
    f11_minus: Scalar | None
    det: Scalar | None


def _extract(p: CalcParams, W: FreeElem) -> tuple[Scalar, Scalar]:
    o2 = omega2(p)
    o11 = omega1(p) @ omega1(p)
    sub = Subspace(o2.dim, p.ring, [o2.coeffs, o11.coeffs])
    if sub.dim != 2:
        raise ArithmeticError("omega_2 and omega_1 (x) omega_1 are dependent")
    target = s_map(p, W).coeffs
    # solve a*o2 + b*o11 = target on two independent coordinates
    bld = EchelonBuilder(o2.dim + 2, p.ring)
    aug2 = dict(o2.coeffs)
    aug2[o2.dim] = p.ring.one
    aug11 = dict(o11.coeffs)
    aug11[o2.dim + 1] = p.ring.one
    bld.add(aug2)
    bld.add(aug11)
    r = bld.reduce(target)
    if any(c < o2.dim for c in r):
        raise ArithmeticError("S(W) not in span of omega_2, omega_1 (x) omega_1")
    zero = p.ring.zero
    return -r.get(o2.dim, zero), -r.get(o2.dim + 1, zero)


def f_constants(p: CalcParams) -> FConstants:
    """f_2, f_11 read off from S(W+-) in the basis omega_2, omega_1 (x) omega_1."""
    w = w_elements(p)
    f2p, f11p = _extract(p, w.W_plus)
    if w.W_minus is None:
        return FConstants(f2p, f11p, None, None, None)
    f2m, f11m = _extract(p, w.W_minus)
    return FConstants(f2p, f11p, f2m, f11m, f2p * f11m - f11p * f2m)


def closed_form_constants(p: CalcParams, mu: Scalar, sign: int, qk: Scalar, swap: bool = False) -> tuple[Scalar, Scalar]:
    """The displayed formulas for f_2 and f_11 with a given q_k and mu.

    ``swap`` flips the sign in the mu^2 prefactor q^(3 +- 1); it exists only
    as a diagnostic for the mismatch recorded in the decisions ledger.
    """
    sc = structure_constants(p)
    q, N, tau = p.q, p.N, p.tau
    common = qk ** (-2 * tau) * q ** (sign * 2 * (1 + tau))
    f2 = common * sc.qnum(N + 2 * sign) - mu
    f11 = (
        q ** (3 - sign if swap else 3 + sign) * sc.qnum(2) * sc.qnum(N).inverse() * sc.qnum(N + sign).inverse() * mu * mu
        - common * sc.qnum(N).inverse() * sc.qnum(N + 2 * sign)
    )
    return f2, f11


# -- basis changes and the differential -------------------------------------------------


@lru_cache(maxsize=None)
def _omega_nu_mats(p: CalcParams) -> tuple[SparseMat, SparseMat]:
    """M with nu-coordinates = M * omega-coordinates, and its inverse."""
    dim = p.N * p.N
    og = omega_gen(p)
    cols = [og[divmod(a, p.N)] for a in range(dim)]
    M = SparseMat.from_columns(dim, cols, p.ring)
    return M, M.inverse()


def basis_transform(p: CalcParams, x: TensorForm, direction: str) -> TensorForm:
    """Per-leg change between nu- and omega-coordinates.

    ``omega->nu`` reads ``x.coeffs`` as omega-coordinates and returns the same
    form in the nu-basis; ``nu->omega`` is the inverse map.
    """
    M, Minv = _omega_nu_mats(p)
    if direction in ("omega->nu", "omega_to_nu"):
        T = M
    elif direction in ("nu->omega", "nu_to_omega"):
        T = Minv
    else:
        raise ValueError(f"unknown direction {direction!r}")
    cols = {a: list(c.items()) for a, c in enumerate(T.columns())}
    dim = p.N * p.N
    vec = dict(x.coeffs)
    for leg in range(x.degree):
        st = dim ** (x.degree - 1 - leg)
        out: dict = {}
        for idx, v in vec.items():
            a = (idx // st) % dim
            base = idx - a * st
            for b, c in cols[a]:
                vec_axpy(out, v * c, {base + b * st: p.ring.one})
        vec = out
    return TensorForm(p.N, x.degree, p.ring, vec)


def differential(p: CalcParams, x: TensorForm) -> TensorForm:
    """d~x = nu_1 (x) x - (-1)^k x (x) nu_1."""
    n1 = nu1(p)
    left = n1 @ x
    right = x @ n1
    return left - right if x.degree % 2 == 0 else left + right
