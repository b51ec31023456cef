"""Type-A R-matrix layer: R-hat, Hecke projectors, structure constants,
the l-functional tables, the representation f of the calculus and the right
action of the coordinate algebra on left-invariant forms.

Conventions
-----------
* Basis of C^N (x) C^N: ``e_i (x) e_j`` has index ``i*N + j`` (0-based).
* ``R[(a,b),(c,d)]`` is the coefficient of ``e_a (x) e_b`` in ``R(e_c (x) e_d)``.
* ``R(e_i (x) e_i) = q e_i (x) e_i``; for i < j ``R(e_i (x) e_j) = e_j (x) e_i + Q e_i (x) e_j``
  and for i > j ``R(e_i (x) e_j) = e_j (x) e_i``.  With this placement the
  bi-invariant form is ``nu_1 = sum_i q^(-2i) nu^i_i`` (1-based i); the mirrored
  placement would reverse those weights.
* ``l^{i}_{j}(u^m_n) = x^{-+1} (R^{+-1})[(i,m),(n,j)]``.
* Letters of words: ``(0, m, n)`` is ``u^m_n`` and ``(1, m, n)`` is ``S(u^m_n)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .exactla import SparseMat, vec_axpy
from .forms import TensorForm
from .scalars import RING_T, RING_TS, Scalar, ScalarRing

__all__ = [
    "CalcParams",
    "DegenerateCalculusError",
    "Letter",
    "rhat",
    "hecke_projectors",
    "structure_constants",
    "StructureConstants",
    "FuncTable",
    "func_table",
    "l_eval",
    "f_eval",
    "triangle_action",
    "apply_chain",
    "u_letter",
    "s_letter",
]

Letter = tuple  # (kind, m, n)


def u_letter(m: int, n: int) -> Letter:
    return (0, m, n)


def s_letter(m: int, n: int) -> Letter:
    return (1, m, n)


class DegenerateCalculusError(ValueError):
    def __init__(self, msg: str = "degenerate calculus"):
        super().__init__(msg)


_TAU = {"plus": 1, "+": 1, 1: 1, "minus": -1, "-": -1, -1: -1}


@dataclass(frozen=True)
class CalcParams:
    """One calculus Gamma_{tau,z} together with its scalar-field embedding.

    SL mode works in Q(t) with q = t^N and x = y = t (negative branch, N = 2:
    y = -t), and z = (xy)^(-tau); then x^N = y^N = q holds identically.  GL mode
    takes x = 1 and y = z^(-tau); its ``generic-z`` branch uses Q(t, s) with
    q = t and z = s.
    """

    N: int
    tau: int = 1
    group: str = "SL"
    branch: str = "principal"

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("N must be at least 2")
        tau = _TAU.get(self.tau)
        if tau is None:
            raise ValueError(f"tau must be plus or minus, got {self.tau!r}")
        object.__setattr__(self, "tau", tau)
        if self.group not in ("SL", "GL"):
            raise ValueError("group must be SL or GL")
        if self.branch not in ("principal", "negative", "generic-z"):
            raise ValueError(f"unknown branch {self.branch!r}")
        if self.branch == "negative" and self.N != 2:
            raise ValueError("the negative z-branch exists only for N = 2 (needs cyclotomic coefficients otherwise)")
        if self.branch == "generic-z" and self.group != "GL":
            raise ValueError("generic-z branch requires GL mode")

    @property
    def tau_name(self) -> str:
        return "plus" if self.tau == 1 else "minus"

    @cached_property
    def ring(self) -> ScalarRing:
        return RING_TS if self.branch == "generic-z" else RING_T

    @cached_property
    def q(self) -> Scalar:
        t = self.ring.gen(0)
        return t if self.branch == "generic-z" else t ** self.N

    @cached_property
    def _xy(self) -> tuple[Scalar, Scalar, Scalar]:
        R = self.ring
        t = R.gen(0)
        if self.branch == "generic-z":
            z = R.gen(1)
            return R.one, z ** (-self.tau), z
        sign = -1 if self.branch == "negative" else 1
        if self.group == "SL":
            x, y = t, t * sign
        else:
            x = R.one
            y = (t * t * sign)
        z = (x * y) ** (-self.tau)
        if self.group == "GL":
            y = z ** (-self.tau)
        return x, y, z

    @property
    def x(self) -> Scalar:
        return self._xy[0]

    @property
    def y(self) -> Scalar:
        return self._xy[1]

    @property
    def z(self) -> Scalar:
        return self._xy[2]

    def label(self) -> str:
        return f"{self.group}_q({self.N}) tau={self.tau_name} branch={self.branch}"

    def as_dict(self) -> dict:
        return {"N": self.N, "tau": self.tau_name, "group": self.group, "branch": self.branch}


# -- R-matrix ------------------------------------------------------------------


@lru_cache(maxsize=None)
def _rhat_cached(N: int, ring: ScalarRing, q: Scalar) -> tuple[SparseMat, SparseMat]:
    Q = q - q.inverse()
    ent: dict[tuple[int, int], Scalar] = {}
    inv: dict[tuple[int, int], Scalar] = {}
    for i in range(N):
        for j in range(N):
            col = i * N + j
            if i == j:
                ent[(col, col)] = q
                inv[(col, col)] = q.inverse()
            elif i < j:
                ent[(j * N + i, col)] = ring.one
                ent[(col, col)] = Q
                inv[(j * N + i, col)] = ring.one
            else:
                ent[(j * N + i, col)] = ring.one
                inv[(j * N + i, col)] = ring.one
                inv[(col, col)] = -Q
    R = SparseMat.from_entries(N * N, N * N, ring, ent)
    Rinv = SparseMat.from_entries(N * N, N * N, ring, inv)
    return R, Rinv


def rhat(N: int, q: Scalar | None = None) -> tuple[SparseMat, SparseMat]:
    """Braid-form type-A R-matrix and its inverse (q defaults to t)."""
    if q is None:
        q = RING_T.gen(0)
    return _rhat_cached(N, q.ring, q)


def hecke_projectors(N: int, q: Scalar | None = None) -> tuple[SparseMat, SparseMat]:
    if q is None:
        q = RING_T.gen(0)
    R, _ = rhat(N, q)
    ring = q.ring
    qi = q.inverse()
    Qp = q + qi
    I = SparseMat.identity(N * N, ring)
    P_plus = (R + I.scale(qi)).scale(Qp.inverse())
    P_minus = (I.scale(q) - R).scale(Qp.inverse())
    return P_plus, P_minus


# -- constants -------------------------------------------------------------------


@dataclass(frozen=True)
class StructureConstants:
    q: Scalar
    z: Scalar
    Q: Scalar
    Q_plus: Scalar
    r_tau: Scalar
    theta_tau: Scalar
    N: int

    def qnum(self, n: int) -> Scalar:
        """(n)_q = q^-2 + q^-4 + ... + q^-2n."""
        acc = self.q.ring.zero
        qi2 = self.q ** -2
        term = qi2
        for _ in range(n):
            acc = acc + term
            term = term * qi2
        return acc


def structure_constants(p: CalcParams) -> StructureConstants:
    q, z = p.q, p.z
    qi = q.inverse()
    Q = q - qi
    Qp = q + qi
    r = qi * Q if p.tau == 1 else -(q ** (-2 * p.N - 1)) * Q
    tmp = StructureConstants(q, z, Q, Qp, r, p.ring.zero, p.N)
    qn = tmp.qnum(p.N)
    theta = z * (qn + r) - qn
    if not theta:
        raise DegenerateCalculusError()
    return StructureConstants(q, z, Q, Qp, r, theta, p.N)


# -- functional tables ---------------------------------------------------------------


@dataclass
class FuncTable:
    """Evaluation tables of the l-functionals and of the representation f.

    ``L[sign]`` is the N^2 x N^2 matrix ``[(i,m),(j,n)] -> l^{sign,i}_j(u^m_n)``
    with x = 1 and ``LS[sign]`` its inverse (arguments ``S(u^m_n)``).
    ``f_u[(m, n)]`` and ``f_s[(m, n)]`` are the N^2 x N^2 matrices of f on
    ``u^m_n`` and on ``S(u^m_n)``, rows = input nu-letter, cols = output letter.
    """

    params: CalcParams
    L: dict
    LS: dict
    f_u: dict
    f_s: dict

    def l_letter(self, sign: int, letter: Letter, x: Scalar) -> SparseMat:
        """N x N matrix [i, j] -> l^{sign,i}_j(letter) with parameter x."""
        kind, m, n = letter
        N = self.params.N
        tab = self.L[sign] if kind == 0 else self.LS[sign]
        scale = x ** (-sign) if kind == 0 else x ** sign
        ent = {}
        for i in range(N):
            row = tab.row(i * N + m)
            for j in range(N):
                v = row.get(j * N + n)
                if v is not None:
                    ent[(i, j)] = v * scale
        return SparseMat.from_entries(N, N, self.params.ring, ent)


@lru_cache(maxsize=None)
def func_table(p: CalcParams) -> FuncTable:
    N = p.N
    ring = p.ring
    R, Rinv = rhat(N, p.q)
    L, LS = {}, {}
    for sign, M in ((1, R), (-1, Rinv)):
        ent = {}
        for (row, col), v in M.entries.items():
            i, m = divmod(row, N)
            n, j = divmod(col, N)
            ent[(i * N + m, j * N + n)] = v
        Lm = SparseMat.from_entries(N * N, N * N, ring, ent)
        L[sign] = Lm
        LS[sign] = Lm.inverse()
    # f = l^{tau}_x (x) l^{-tau, c}_y ; the contragredient leg is a -> l(S a)^T
    tau = p.tau
    x, y = p.x, p.y
    sx_u = x ** (-tau)        # scale of l^{tau}_x on u
    sy_su = y ** (-tau)       # scale of l^{-tau}_y on S(u)
    dim = N * N
    # F[(I, p), (J, r)] = f^I_J(u^p_r), I = (i, j) -> i*N + j
    big: dict[tuple[int, int], Scalar] = {}
    A, B = L[tau], LS[-tau]
    for pp in range(N):
        for r in range(N):
            for s in range(N):
                for (i, mm), v1 in _slice(A, N, pp, s).items():
                    for (nn, j), v2 in _slice(B, N, s, r).items():
                        I = i * N + j
                        J = mm * N + nn
                        key = (I * N + pp, J * N + r)
                        big[key] = big.get(key, ring.zero) + v1 * v2 * sx_u * sy_su
    F = SparseMat.from_entries(dim * N, dim * N, ring, big)
    FS = F.inverse()
    f_u, f_s = {}, {}
    for pp in range(N):
        for r in range(N):
            f_u[(pp, r)] = _block(F, N, dim, pp, r, ring)
            f_s[(pp, r)] = _block(FS, N, dim, pp, r, ring)
    return FuncTable(p, L, LS, f_u, f_s)


def _slice(tab: SparseMat, N: int, m: int, n: int) -> dict[tuple[int, int], Scalar]:
    """(i, j) -> tab[(i,m),(j,n)] i.e. l^i_j(letter^m_n)."""
    out = {}
    for i in range(N):
        row = tab.row(i * N + m)
        for j in range(N):
            v = row.get(j * N + n)
            if v is not None:
                out[(i, j)] = v
    return out


def _block(F: SparseMat, N: int, dim: int, pp: int, r: int, ring) -> SparseMat:
    ent = {}
    for I in range(dim):
        row = F.row(I * N + pp)
        for J in range(dim):
            v = row.get(J * N + r)
            if v is not None:
                ent[(I, J)] = v
    return SparseMat.from_entries(dim, dim, ring, ent)


def l_eval(p: CalcParams, sign, word: Sequence[Letter], x: Scalar | None = None) -> SparseMat:
    """l^{sign}_x on a word: product of per-letter N x N tables (identity for [])."""
    sign = _TAU[sign]
    tab = func_table(p)
    x = p.x if x is None else x
    out = SparseMat.identity(p.N, p.ring)
    for letter in word:
        out = out @ tab.l_letter(sign, letter, x)
    return out


def f_eval(p: CalcParams, word: Sequence[Letter]) -> SparseMat:
    """Representation f of the calculus on a word (N^2 x N^2, rows = input letter)."""
    tab = func_table(p)
    out = SparseMat.identity(p.N * p.N, p.ring)
    for kind, m, n in word:
        out = out @ (tab.f_u[(m, n)] if kind == 0 else tab.f_s[(m, n)])
    return out


# -- leg-wise action -------------------------------------------------------------


def apply_chain(vec: dict, k: int, N: int, first: int, last: int, leg_table, dim: int) -> dict:
    """Apply a matrix-coalgebra element ``M^first_last`` leg by leg.

    ``Delta M^a_b = sum_s M^a_s (x) M^s_b``; ``leg_table(a, b)`` returns the
    per-leg action of ``M^a_b`` as a dict ``in_letter -> [(out_letter, coef)]``.
    """
    if k == 0:
        return dict(vec) if first == last else {}
    states: dict[tuple[int, int], dict] = {}
    for idx, v in vec.items():
        states.setdefault(first, {})[idx] = v
    stride = [dim ** (k - 1 - l) for l in range(k)]
    for leg in range(k):
        st = stride[leg]
        nxt: dict[int, dict] = {}
        targets = range(N) if leg < k - 1 else (last,)
        for s, part in states.items():
            for s2 in targets:
                tab = leg_table(s, s2)
                if not tab:
                    continue
                acc = nxt.setdefault(s2, {})
                for idx, v in part.items():
                    a = (idx // st) % dim
                    outs = tab.get(a)
                    if not outs:
                        continue
                    base = idx - a * st
                    for b, c in outs:
                        key = base + b * st
                        w = acc.get(key)
                        val = v * c
                        if w is None:
                            acc[key] = val
                        else:
                            w = w + val
                            if w:
                                acc[key] = w
                            else:
                                del acc[key]
        states = nxt
    return states.get(last, {})


def _leg_tables(tab: FuncTable, kind: int):
    cache = {}
    src = tab.f_u if kind == 0 else tab.f_s

    def get(a, b):
        # kind 0: M^a_b = u^a_b ; kind 1: M^a_b = S(u^b_a)
        key = (a, b)
        if key not in cache:
            mat = src[(a, b)] if kind == 0 else src[(b, a)]
            cache[key] = {i: list(row.items()) for i, row in mat.row_items()}
        return cache[key]

    return get


@lru_cache(maxsize=None)
def _cached_leg_tables(p: CalcParams):
    tab = func_table(p)
    return _leg_tables(tab, 0), _leg_tables(tab, 1)


def triangle_action(p: CalcParams, x: TensorForm, word: Sequence[Letter]) -> TensorForm:
    """Right action x |> a on the k-th tensor power, letter by letter."""
    N = p.N
    dim = N * N
    legs_u, legs_s = _cached_leg_tables(p)
    vec = dict(x.coeffs)
    for kind, m, n in word:
        if kind == 0:
            vec = apply_chain(vec, x.degree, N, m, n, legs_u, dim)
        else:
            # Delta S(u^m_n) = sum_s S(u^s_n) (x) S(u^m_s): chain from n to m
            vec = apply_chain(vec, x.degree, N, n, m, legs_s, dim)
    return TensorForm(N, x.degree, p.ring, vec)
