"""Structural invariant checks for one parameter set.

Each function returns a list of :class:`Check` verdicts; nothing here raises
on a failed identity.
"""

from __future__ import annotations

import itertools
import random

from .braidext import (
    antisymmetrizer,
    antisymmetrizer_matrix,
    apply_slot,
    braiding,
    direct_signed_sum,
    nu1,
    quotient_reduce,
    shuffle_sum_matrix,
    _sigma_cols,
)
from .exactla import SparseMat, rank_kernel
from .fodc import (
    FreeElem,
    closed_form_constants,
    differential,
    f_constants,
    omega_direct,
    omega_gen,
    omega_map,
    quantum_det,
    rtt_relations,
    s_map,
    w_elements,
)
from .forms import TensorForm
from .ideals import tsygan_span
from .invariants import all_generators, uq_action
from .qgroup import CalcParams, l_eval, rhat, structure_constants, triangle_action, u_letter
from .report import Check

__all__ = [
    "check_rhat",
    "check_ltables",
    "check_right_action",
    "check_sigma",
    "check_antisymmetrizer",
    "check_maurer_cartan",
    "check_upsilon_identity",
    "check_dtilde",
    "check_omega",
    "check_equivariance",
    "structural_suite",
    "dtilde_kmax",
    "theta_closed_form",
    "constants_checks",
]


def check_rhat(p: CalcParams) -> list[Check]:
    N = p.N
    R, Rinv = rhat(N, p.q)
    I = SparseMat.identity(N * N, p.ring)
    hecke = ((R - I.scale(p.q)) @ (R + I.scale(p.q.inverse()))).is_zero()
    out = [Check("Hecke relation", hecke), Check("R-hat inverse", (R @ Rinv) == I)]
    I1 = SparseMat.identity(N, p.ring)
    R1 = R.kron(I1)
    R2 = I1.kron(R)
    out.append(Check("braid equation for R-hat", (R1 @ R2 @ R1) == (R2 @ R1 @ R2)))
    return out


def check_ltables(p: CalcParams) -> list[Check]:
    """l-functionals respect the RTT relations; SL determinant and antipode."""
    N = p.N
    R, _ = rhat(N, p.q)
    bad = 0
    for sign in (1, -1):
        for a, b, c, d in itertools.product(range(N), repeat=4):
            acc = SparseMat.zeros(N, N, p.ring)
            for e, f in itertools.product(range(N), repeat=2):
                r1 = R[(a * N + b, e * N + f)]
                if r1:
                    acc = acc + l_eval(p, sign, [u_letter(e, c), u_letter(f, d)]).scale(r1)
                r2 = R[(e * N + f, c * N + d)]
                if r2:
                    acc = acc - l_eval(p, sign, [u_letter(a, e), u_letter(b, f)]).scale(r2)
            bad += not acc.is_zero()
    out = [Check("l-functionals respect RTT", bad == 0, {"bad_entries": bad})]
    det = quantum_det(p)
    ok = True
    for sign in (1, -1):
        acc = SparseMat.zeros(N, N, p.ring)
        for w, c in det.terms.items():
            acc = acc + l_eval(p, sign, [u_letter(*x) for x in w], x=p.x).scale(c)
        ok &= acc == SparseMat.identity(N, p.ring)
    out.append(Check("l-functionals on the quantum determinant", ok))
    inv_ok = True
    for sign in (1, -1):
        for m, n in itertools.product(range(N), repeat=2):
            acc = SparseMat.zeros(N, N, p.ring)
            for k in range(N):
                acc = acc + l_eval(p, sign, [u_letter(m, k), (1, k, n)])
            want = SparseMat.identity(N, p.ring) if m == n else SparseMat.zeros(N, N, p.ring)
            inv_ok &= acc == want
    out.append(Check("l-functionals antipode inverse property", inv_ok))
    return out


def check_right_action(p: CalcParams) -> list[Check]:
    """Upsilon_I |> u_II = z R Upsilon_II R and nu_1 |> u = z r Upsilon + z nu_1 I."""
    N = p.N
    ring = p.ring
    sc = structure_constants(p)
    R, Rinv = rhat(N, p.q)
    Rt = R if p.tau == 1 else Rinv
    z = p.z
    bad1 = 0
    for a, b, c, d in itertools.product(range(N), repeat=4):
        lhs = triangle_action(p, TensorForm.nu(N, ring, a, c), [u_letter(b, d)])
        rhs = TensorForm.zero(N, 1, ring)
        for e, f, h in itertools.product(range(N), repeat=3):
            v = Rt[(a * N + b, e * N + f)] * Rt[(e * N + h, c * N + d)]
            if v:
                rhs = rhs + TensorForm.nu(N, ring, f, h) * (v * z)
        bad1 += lhs != rhs
    n1 = nu1(p)
    bad2 = 0
    for i, j in itertools.product(range(N), repeat=2):
        lhs = triangle_action(p, n1, [u_letter(i, j)])
        rhs = TensorForm.nu(N, ring, i, j) * (z * sc.r_tau)
        if i == j:
            rhs = rhs + n1 * z
        bad2 += lhs != rhs
    return [
        Check("right action of u on Upsilon", bad1 == 0, {"bad_entries": bad1}),
        Check("right action of u on nu_1", bad2 == 0, {"bad_entries": bad2}),
    ]


def check_sigma(p: CalcParams) -> list[Check]:
    N = p.N
    dim = N * N
    cols = _sigma_cols(p)
    try:
        braiding(p)
        valid = True
    except RuntimeError:
        valid = False
    n1 = nu1(p)
    n11 = (n1 @ n1).coeffs
    fixed = apply_slot(n11, cols, 1, 2, dim) == n11
    return [
        Check("sigma braid equation and sigma(x (x) nu_1) = nu_1 (x) x", valid),
        Check("sigma fixes nu_1 (x) nu_1", fixed),
    ]


def check_antisymmetrizer(p: CalcParams, k_max: int = 4) -> list[Check]:
    out = []
    for k in range(1, k_max + 1):
        out.append(Check(f"A_{k} recursion = signed sum over S_{k}", antisymmetrizer_matrix(p, k) == direct_signed_sum(p, k)))
    for k in range(2, k_max + 1):
        for i in range(1, k):
            lhs = antisymmetrizer_matrix(p, k)
            rhs = shuffle_sum_matrix(p, k, i) @ antisymmetrizer_matrix(p, i).kron(antisymmetrizer_matrix(p, k - i))
            out.append(Check(f"shuffle factorization A_{k} = A_{k}{i}(A_{i} (x) A_{k - i})", lhs == rhs))
    return out


def _zero_in_lambda(p: CalcParams, x: TensorForm) -> bool:
    return quotient_reduce(p, x.degree, x).is_zero()


def check_maurer_cartan(p: CalcParams) -> list[Check]:
    """Class of d~omega^i_j + sum_x omega^i_x (x) omega^x_j vanishes in degree 2."""
    N = p.N
    og = omega_gen(p)
    form = {k: TensorForm(N, 1, p.ring, v) for k, v in og.items()}
    bad = 0
    for i, j in itertools.product(range(N), repeat=2):
        x = differential(p, form[(i, j)])
        for m in range(N):
            x = x + (form[(i, m)] @ form[(m, j)])
        bad += not _zero_in_lambda(p, x)
    return [Check("Maurer-Cartan normal forms vanish", bad == 0, {"bad_entries": bad})]


def check_upsilon_identity(p: CalcParams) -> list[Check]:
    """r (Upsilon Upsilon)^i_j + nu^i_j nu_1 + nu_1 nu^i_j vanishes in degree 2."""
    N = p.N
    r = structure_constants(p).r_tau
    n1 = nu1(p)
    bad = 0
    for i, j in itertools.product(range(N), repeat=2):
        x = (TensorForm.nu(N, p.ring, i, j) @ n1) + (n1 @ TensorForm.nu(N, p.ring, i, j))
        for m in range(N):
            x = x + (TensorForm.nu(N, p.ring, i, m) @ TensorForm.nu(N, p.ring, m, j)) * r
        bad += not _zero_in_lambda(p, x)
    return [Check("r Upsilon Upsilon + Upsilon nu_1 + nu_1 Upsilon vanishes", bad == 0, {"bad_entries": bad})]


def dtilde_kmax(p: CalcParams) -> int:
    return 4 if p.N == 2 else 2


def check_dtilde(p: CalcParams, k_max: int | None = None) -> list[Check]:
    """d~ maps ker A_k into ker A_{k+1}."""
    k_max = dtilde_kmax(p) if k_max is None else k_max
    A = antisymmetrizer(p)
    out = []
    for k in range(1, k_max + 1):
        ker = rank_kernel(antisymmetrizer_matrix(p, k)).kernel
        bad = 0
        for row in ker.basis:
            d = differential(p, TensorForm(p.N, k, p.ring, row))
            bad += bool(A.apply(d.coeffs, k + 1))
        out.append(Check(f"d~(ker A_{k}) in ker A_{k + 1}", bad == 0, {"kernel_dim": ker.dim, "bad": bad}))
    return out


def check_omega(p: CalcParams, samples: int = 12, seed: int = 0) -> list[Check]:
    N = p.N
    rng = random.Random(seed)
    agree = True
    for _ in range(samples):
        w = tuple((rng.randrange(N), rng.randrange(N)) for _ in range(rng.randrange(1, 4)))
        a = FreeElem.word(N, p.ring, w)
        agree &= omega_map(p, a) == omega_direct(p, a)
    rels = rtt_relations(p) + [quantum_det(p) - FreeElem.one(N, p.ring)]
    kills = all(not omega_map(p, r) and not s_map(p, r) for r in rels)
    return [
        Check("omega recursion = nu_1 |> a - eps(a) nu_1", agree, {"samples": samples}),
        Check("omega and S kill the defining relations", kills, {"relations": len(rels)}),
    ]


def check_equivariance(p: CalcParams, k_max: int = 3, samples: int = 3, seed: int = 0) -> list[Check]:
    """A_k commutes with the right action of generators and with pi(l)."""
    N = p.N
    dim = N * N
    rng = random.Random(seed)
    A = antisymmetrizer(p)
    ok_tri = ok_pi = True
    gens = all_generators(N)
    for k in range(2, k_max + 1):
        for _ in range(samples):
            vec = {rng.randrange(dim ** k): p.ring(rng.randint(1, 5)) for _ in range(3)}
            x = TensorForm(N, k, p.ring, vec)
            Ax = TensorForm(N, k, p.ring, A.apply(vec, k))
            m, n = rng.randrange(N), rng.randrange(N)
            l = triangle_action(p, Ax, [u_letter(m, n)])
            r = A.apply(triangle_action(p, x, [u_letter(m, n)]).coeffs, k)
            ok_tri &= l.coeffs == r
            s, i, j = gens[rng.randrange(len(gens))]
            l = uq_action(p, s, (i, j), Ax)
            r = A.apply(uq_action(p, s, (i, j), x).coeffs, k)
            ok_pi &= l.coeffs == r
    return [
        Check("A_k commutes with the right action", ok_tri, {"k_max": k_max}),
        Check("A_k commutes with the l-functional action", ok_pi, {"k_max": k_max}),
    ]


def structural_suite(p: CalcParams) -> list[Check]:
    out = []
    out += check_rhat(p)
    out += check_ltables(p)
    out += check_right_action(p)
    out += check_sigma(p)
    if p.N == 2:
        out += check_antisymmetrizer(p, 4)
    else:
        out += check_antisymmetrizer(p, 2)
    out += check_maurer_cartan(p)
    out += check_upsilon_identity(p)
    out += check_dtilde(p)
    out += check_omega(p)
    out += check_equivariance(p, 3 if p.N == 2 else 2)
    out += tsygan_span(p).checks
    return out


def theta_closed_form(p: CalcParams):
    """+-q^-5 (q -+ 1)(q^3 -+ 1) for N = 2; upper sign on the principal branch."""
    q = p.q
    s = -1 if p.branch == "negative" else 1
    return (q ** -5) * (q - s) * (q ** 3 - s) * s


def constants_checks(p: CalcParams) -> tuple[dict, list[Check]]:
    """Structure constants plus the f-constants of S(W+-) against the closed forms."""
    sc = structure_constants(p)
    results = {
        "q": sc.q, "z": sc.z, "Q": sc.Q, "Q_plus": sc.Q_plus,
        "r_tau": sc.r_tau, "theta_tau": sc.theta_tau, "qnum_N": sc.qnum(p.N),
    }
    checks = [Check("theta_tau nonzero", bool(sc.theta_tau), {"theta_tau": sc.theta_tau})]
    if p.N == 2 and p.branch != "generic-z":
        want = theta_closed_form(p)
        checks.append(Check("theta_tau = +-q^-5 (q -+ 1)(q^3 -+ 1)", sc.theta_tau == want,
                            {"computed": sc.theta_tau, "closed_form": want}))
    w = w_elements(p)
    fc = f_constants(p)
    qk = p.z ** (-p.tau)
    sides = [("+", 1, w.mu_plus, fc.f2_plus, fc.f11_plus)]
    if fc.f2_minus is not None:
        sides.append(("-", -1, w.mu_minus, fc.f2_minus, fc.f11_minus))
    for tag, sign, mu, f2, f11 in sides:
        results[f"mu{tag}"] = mu
        results[f"f2{tag}"] = f2
        results[f"f11{tag}"] = f11
        c2, c11 = closed_form_constants(p, mu, sign, qk)
        _, s11 = closed_form_constants(p, mu, sign, qk, swap=True)
        checks.append(Check(f"f2{tag} matches closed formula", f2 == c2, {"computed": f2, "closed_form": c2}))
        checks.append(Check(f"f11{tag} matches closed formula", f11 == c11,
                            {"computed": f11, "closed_form": c11, "ratio": f11 / c11 if c11 else None}))
        checks.append(Check(f"f11{tag} diagnostic: prefactor q^(3{'-' if sign == 1 else '+'}1)", f11 == s11,
                            {"closed_form": s11}))
    if fc.det is not None:
        results["det"] = fc.det
        checks.append(Check("f2+ f11- - f11+ f2- nonzero", bool(fc.det), {"det": fc.det}))
    return results, checks
