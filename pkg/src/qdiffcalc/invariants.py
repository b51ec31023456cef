"""Bi-invariant forms: the dual action of the l-functionals on tensor powers
of Gamma_l, bi-invariant subspaces, their images in Lambda_w, and the checks
of graded commutativity and closedness.

Right invariance of x is detected as ``pi(l^{+-,i}_j) x = delta^i_j x``
where ``pi(h) = (id (x) h) Delta_R``.  On a tensor ``nu_{A_1} ... nu_{A_k}``
the coaction coefficients are products of ``S(u^a_m) u^n_b`` and the
functional l^i_j splits over the legs as a matrix product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .braidext import (
    EXACT_CEILING,
    _modular_image,
    _slot_mod,
    _sigma_mod,
    antisymmetrizer,
    draw_sample_points,
    nu1,
    weight,
)
from .exactla import (
    EchelonBuilder,
    Modular,
    ResourceLimitError,
    SparseMat,
    Subspace,
    rank_kernel,
    parallel_map,
    rank_mod_p,
    vec_axpy,
)
from .fodc import differential
from .forms import TensorForm, decode
from .qgroup import CalcParams, apply_chain, func_table, s_letter, u_letter
from .report import Check
from .scalars import SpecializationError

__all__ = [
    "uq_action",
    "pi_leg_tables",
    "biinvariant_basis",
    "biinv_lambda_dims",
    "BiinvDims",
    "verify_biinvariant_forms",
    "lambda_biinv_reps",
    "weight_zero_indices",
    "all_generators",
    "chevalley_generators",
]


@lru_cache(maxsize=None)
def pi_leg_tables(p: CalcParams, sign: int):
    """leg(s, s2): in-letter (a,b) -> [(out-letter (m,n), l^{s}_{s2}(S(u^a_m) u^n_b))]."""
    tab = func_table(p)
    N = p.N
    one = p.ring.one
    lu = {(m, n): tab.l_letter(sign, u_letter(m, n), one) for m in range(N) for n in range(N)}
    ls = {(m, n): tab.l_letter(sign, s_letter(m, n), one) for m in range(N) for n in range(N)}
    # prod[(a,m,n,b)] = l(S u^a_m) l(u^n_b), an N x N matrix
    prods = {}
    for a, m, n, b in itertools.product(range(N), repeat=4):
        M = ls[(a, m)] @ lu[(n, b)]
        if not M.is_zero():
            prods[(a, m, n, b)] = M
    cache: dict = {}

    def leg(s, s2):
        key = (s, s2)
        if key not in cache:
            out: dict = {}
            for (a, m, n, b), M in prods.items():
                v = M.row(s).get(s2)
                if v is not None:
                    out.setdefault(a * N + b, []).append((m * N + n, v))
            cache[key] = out
        return cache[key]

    return leg


def _pi_vec(p: CalcParams, sign: int, i: int, j: int, vec: dict, k: int) -> dict:
    return apply_chain(vec, k, p.N, i, j, pi_leg_tables(p, sign), p.N * p.N)


def uq_action(p: CalcParams, sign, ij: tuple[int, int], x: TensorForm) -> TensorForm:
    """pi(l^{sign,i}_j) x = (id (x) l^{sign,i}_j) Delta_R x."""
    sign = 1 if sign in (1, "+", "plus") else -1
    i, j = ij
    return TensorForm(x.N, x.degree, x.ring, _pi_vec(p, sign, i, j, x.coeffs, x.degree))


def all_generators(N: int) -> list[tuple[int, int, int]]:
    return [(s, i, j) for s in (1, -1) for i in range(N) for j in range(N)]


def chevalley_generators(N: int) -> list[tuple[int, int, int]]:
    """Off-diagonal simple-root entries of l^+ and l^- that do not vanish."""
    return [(1, i, i + 1) for i in range(N - 1)] + [(-1, i + 1, i) for i in range(N - 1)]


def weight_zero_indices(N: int, k: int) -> list[int]:
    dim = N * N
    zero = (0,) * N
    return [idx for idx in range(dim ** k) if weight(decode(idx, k, N), N) == zero]


def _fixed_defect(p: CalcParams, gen, vec: dict, k: int) -> dict:
    s, i, j = gen
    out = _pi_vec(p, s, i, j, vec, k)
    if i == j:
        vec_axpy(out, -p.ring.one, vec)
    return out


@lru_cache(maxsize=None)
def biinvariant_basis(p: CalcParams, k: int) -> Subspace:
    """Joint fixed space of all pi(l^{+-,i}_j) in the k-th tensor power.

    The diagonal functionals act by q^weight, so the solution lies in weight
    zero; there the simple-root functionals cut out the solution, and the
    result is then checked against every generator.
    """
    N = p.N
    dim = N * N
    if k == 0:
        return Subspace(1, p.ring, [{0: p.ring.one}])
    if dim ** k > EXACT_CEILING * 2:
        raise ResourceLimitError(f"tensor power {dim ** k} above the bi-invariant ceiling {EXACT_CEILING * 2}")
    cols = weight_zero_indices(N, k)
    rows: dict[tuple, dict] = {}
    for c, idx in enumerate(cols):
        for g, gen in enumerate(chevalley_generators(N)):
            for out, v in _fixed_defect(p, gen, {idx: p.ring.one}, k).items():
                rows.setdefault((g, out), {})[c] = v
    mat = SparseMat(len(rows), len(cols), p.ring, dict(enumerate(rows.values())))
    ker = rank_kernel(mat).kernel
    basis = [{cols[c]: v for c, v in row.items()} for row in ker.basis]
    for vec in basis:
        for gen in all_generators(N):
            if _fixed_defect(p, gen, vec, k):
                raise ArithmeticError(f"generator {gen} does not fix the computed basis")
    return Subspace(dim ** k, p.ring, basis)


# -- Lambda-level dimensions ---------------------------------------------------------


@dataclass
class BiinvDims:
    dims: list[int]
    certificates: list[str]
    tensor_dims: list[int]


def _exact_image_rank(p: CalcParams, k: int, basis: Subspace) -> int:
    A = antisymmetrizer(p)
    bld = EchelonBuilder(basis.ambient_dim, p.ring)
    for row in basis.basis:
        bld.add(A.apply(row, k))
    return len(bld)


def _modular_image_rank(p: CalcParams, k: int, basis: Subspace, mode: Modular) -> list[int]:
    dim = p.N * p.N
    pts = []
    for point, prime in draw_sample_points(p, mode):
        try:
            X = np.zeros((max(basis.dim, 1), dim ** k), dtype=np.int64)
            for r, row in enumerate(basis.basis):
                for c, v in row.items():
                    X[r, c] = v.specialize(point, prime)
        except SpecializationError:
            raise SpecializationError("basis entry does not specialize at a sample point") from None
        pts.append((X, point, prime))

    def one(item):
        X, point, prime = item
        return rank_mod_p(_modular_image(X, _sigma_mod(p, point, prime), k, dim, prime), prime)

    return parallel_map(one, pts)


def biinv_lambda_dims(p: CalcParams, k_max: int, mode_for=None) -> BiinvDims:
    """dim A_k(bi-invariant tensors) for k = 0..k_max.

    ``mode_for(k)`` returns "exact" or a :class:`Modular`; by default degrees
    whose tensor dimension exceeds the exact ceiling run modular.
    """
    dims, certs, tdims = [], [], []
    for k in range(k_max + 1):
        basis = biinvariant_basis(p, k)
        tdims.append(basis.dim)
        mode = mode_for(k) if mode_for else ("exact" if (p.N * p.N) ** k <= EXACT_CEILING else Modular(3, 0))
        if k <= 1:
            dims.append(basis.dim)
            certs.append("exact")
        elif mode == "exact":
            dims.append(_exact_image_rank(p, k, basis))
            certs.append("exact")
        else:
            ranks = _modular_image_rank(p, k, basis, mode)
            dims.append(max(ranks))
            certs.append("probabilistic-lower-bound-agreed" if len(set(ranks)) == 1 else "probabilistic-lower-bound")
    return BiinvDims(dims, certs, tdims)


# -- graded commutativity and closedness ------------------------------------------------


def lambda_biinv_reps(p: CalcParams, k: int) -> list[TensorForm]:
    """Bi-invariant tensors whose classes form a basis of the bi-invariant part of Lambda_w^k."""
    basis = biinvariant_basis(p, k)
    if k <= 1:
        return [TensorForm(p.N, k, p.ring, row) for row in basis.basis]
    A = antisymmetrizer(p)
    bld = EchelonBuilder(basis.ambient_dim, p.ring)
    reps = []
    for row in basis.basis:
        if bld.add(A.apply(row, k)):
            reps.append(TensorForm(p.N, k, p.ring, row))
    return reps


def _vanishes_mod(p: CalcParams, vec: dict, k: int, mode: Modular) -> bool:
    """A_k vec = 0 at every sample point (probabilistic)."""
    if not vec:
        return True
    basis = Subspace((p.N * p.N) ** k, p.ring, [vec], _trusted=True)
    return max(_modular_image_rank(p, k, basis, mode)) == 0


def _in_kernel(p: CalcParams, vec: dict, k: int) -> tuple[bool, str]:
    if (p.N * p.N) ** k <= EXACT_CEILING:
        return not antisymmetrizer(p).apply(vec, k), "exact"
    return _vanishes_mod(p, vec, k, Modular(3, 0)), "probabilistic-lower-bound-agreed"


def verify_biinvariant_forms(p: CalcParams, k_max: int) -> list[Check]:
    """Graded commutativity and closedness of bi-invariant forms in Lambda_w."""
    checks: list[Check] = []
    reps = {k: lambda_biinv_reps(p, k) for k in range(1, k_max + 1)}
    for k, n in itertools.product(range(1, k_max + 1), repeat=2):
        if k + n > k_max or k > n:
            continue
        for a, x in enumerate(reps[k]):
            for b, y in enumerate(reps[n]):
                sgn = -1 if (k * n) % 2 else 1
                diff = (x @ y) - (y @ x) * sgn
                ok, cert = _in_kernel(p, diff.coeffs, k + n)
                checks.append(Check(
                    f"graded-commutativity deg ({k},{n}) pair ({a},{b})",
                    ok, {"degrees": [k, n], "sign": sgn}, cert,
                ))
    for k in range(1, k_max):
        for a, x in enumerate(reps[k]):
            ok, cert = _in_kernel(p, differential(p, x).coeffs, k + 1)
            checks.append(Check(f"closedness deg {k} form {a}", ok, {"degree": k}, cert))
    return checks
