"""Acceptance criteria 1-8.

Every comparison is exact (tolerance 0): dimensions are integers and
constants are canonical rational functions.  One line per criterion is
printed at the end of the pytest run, or by running this file directly.
The displayed f_11 formula does not match the computed constants; that part
is an expected failure, explained in the decisions ledger.
"""

from __future__ import annotations

import sys
from functools import lru_cache
from math import comb

import pytest

from qdiffcalc.braidext import lambda_dim, nu1
from qdiffcalc.cli import poincare_coefficients
from qdiffcalc.exactla import Modular
from qdiffcalc.fodc import omega_map, s_map, sl2_gen
from qdiffcalc.ideals import ad_invariant_check, compare_ideals
from qdiffcalc.invariants import biinv_lambda_dims, verify_biinvariant_forms
from qdiffcalc.qgroup import CalcParams, structure_constants
from qdiffcalc.suite import check_antisymmetrizer, constants_checks, structural_suite, theta_closed_form

TOLERANCE = 0  # exact equality throughout
MODULAR = Modular(samples=3, seed=0)

GRID = [
    CalcParams(2, "plus", "SL", "principal"),
    CalcParams(2, "plus", "SL", "negative"),
    CalcParams(2, "minus", "SL", "principal"),
    CalcParams(2, "minus", "SL", "negative"),
    CalcParams(3, "plus", "SL", "principal"),
    CalcParams(3, "minus", "SL", "principal"),
]
GENERIC = [CalcParams(2, "plus", "GL", "generic-z"), CalcParams(2, "minus", "GL", "generic-z")]

# criterion -> [ok, detail]; parts are and-ed together
RESULTS: dict[int, list] = {}
TITLES = {
    1: "rank A_k = C(N^2, k)",
    2: "bi-invariant Lambda dims = Poincare coefficients",
    3: "graded commutativity and closedness of bi-invariant forms",
    4: "S(R)-span versus ker(I - sigma)",
    5: "f-constants, determinant and theta closed forms",
    6: "SL_q(2) identities",
    7: "structural invariant suite",
    8: "branch / tau independence of dimension tables",
}


def record(n: int, ok: bool, detail: str) -> None:
    cur = RESULTS.setdefault(n, [True, []])
    cur[0] = cur[0] and bool(ok)
    cur[1].append(detail)


def summary_lines() -> list[str]:
    out = []
    for n in sorted(TITLES):
        if n not in RESULTS:
            out.append(f"criterion {n}: NOT RUN  {TITLES[n]}")
            continue
        ok, details = RESULTS[n]
        out.append(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {TITLES[n]}  (tolerance {TOLERANCE}; {'; '.join(details)})")
    return out


@lru_cache(maxsize=None)
def rank_table(p: CalcParams, k_max: int) -> tuple:
    rows = []
    for k in range(k_max + 1):
        mode = "exact" if (p.N * p.N) ** k <= 4096 else MODULAR
        rows.append(lambda_dim(p, k, mode))
    return tuple(rows)


@lru_cache(maxsize=None)
def biinv_table(p: CalcParams):
    return biinv_lambda_dims(p, 4)


def _name(p: CalcParams) -> str:
    return f"N={p.N} tau={p.tau_name} {p.branch}"


# -- 1 ------------------------------------------------------------------------


@pytest.mark.parametrize("p", GRID, ids=_name)
def test_criterion1_ranks(p):
    k_max = 5 if p.N == 2 else 4
    table = rank_table(p, k_max)
    dims = [d for d, _ in table]
    want = [comb(p.N * p.N, k) for k in range(k_max + 1)]
    certs = [c for _, c in table]
    ok = dims == want and all(c in ("exact", "probabilistic-lower-bound-agreed") for c in certs)
    if p.N == 3:
        ok = ok and certs[:4] == ["exact"] * 4 and certs[4] == "probabilistic-lower-bound-agreed"
    else:
        ok = ok and set(certs) == {"exact"}
    record(1, ok, f"{_name(p)} {dims}")
    assert ok, (dims, certs)


# -- 2 ------------------------------------------------------------------------


@pytest.mark.parametrize("p", GRID, ids=_name)
def test_criterion2_biinvariant_dims(p):
    bd = biinv_table(p)
    want = poincare_coefficients(p.N, 4)
    ok = bd.dims == want == [1, 1, 0, 1, 1]
    if p.N == 3:
        ok = ok and bd.certificates[:4] == ["exact"] * 4 and bd.certificates[4] == "probabilistic-lower-bound-agreed"
    record(2, ok, f"{_name(p)} {bd.dims}")
    assert ok, (bd.dims, bd.certificates)


# -- 3 ------------------------------------------------------------------------


@pytest.mark.parametrize("p", GRID, ids=_name)
def test_criterion3_commutativity_closedness(p):
    checks = verify_biinvariant_forms(p, 4)
    bad = [c.name for c in checks if not c.ok]
    record(3, checks and not bad, f"{_name(p)} {len(checks)} checks, {len(bad)} failures")
    assert checks and not bad, bad


# -- 4 ------------------------------------------------------------------------


@pytest.mark.parametrize("p", GRID, ids=_name)
def test_criterion4_ideals(p):
    rep = compare_ideals(p, 3 if p.N == 2 else 2, 2)
    r = rep.results[0]
    names = {c.name: c.ok for c in rep.checks}
    if p.N == 2:
        ok = (r["uJ2_dim"], r["sJ2_dim"]) == (9, 10) and names["nu1 (x) nu1 not in uJ2"] and names["sJ2 / uJ2 spanned by nu1 (x) nu1"]
    else:
        ok = r["uJ2_dim"] == r["sJ2_dim"] == 45 and names["uJ2 = sJ2"] and names["nu1 (x) nu1 in uJ2"]
    ok = ok and rep.all_passed
    record(4, ok, f"{_name(p)} S-span {r['uJ2_dim']}, ker {r['sJ2_dim']}")
    assert ok, rep.to_json()


# -- 5 ------------------------------------------------------------------------


@pytest.mark.parametrize("p", [g for g in GRID if g.N == 3], ids=_name)
def test_criterion5_f2_and_determinant(p):
    _, checks = constants_checks(p)
    by = {c.name: c.ok for c in checks}
    ok = by["f2+ matches closed formula"] and by["f2- matches closed formula"] and by["f2+ f11- - f11+ f2- nonzero"]
    record(5, ok, f"{_name(p)} f2+- exact, det nonzero")
    assert ok


@pytest.mark.parametrize("p", [g for g in GRID if g.N == 2], ids=_name)
def test_criterion5_theta(p):
    ok = structure_constants(p).theta_tau == theta_closed_form(p)
    record(5, ok, f"{_name(p)} theta")
    assert ok


@pytest.mark.xfail(strict=True, reason=(
    "computed f11+- carry the mu^2 prefactor q^(3-+1), the displayed formula has q^(3+-1); "
    "see the decisions ledger"
))
@pytest.mark.parametrize("p", [g for g in GRID if g.N == 3], ids=_name)
def test_criterion5_f11_displayed_formula(p):
    _, checks = constants_checks(p)
    by = {c.name: c for c in checks}
    ok = by["f11+ matches closed formula"].ok and by["f11- matches closed formula"].ok
    swapped = by["f11+ diagnostic: prefactor q^(3-1)"].ok and by["f11- diagnostic: prefactor q^(3+1)"].ok
    record(5, ok, f"{_name(p)} f11+- displayed {'match' if ok else 'MISMATCH'}, swapped prefactor {'match' if swapped else 'mismatch'}")
    assert ok


# -- 6 ------------------------------------------------------------------------


@pytest.mark.parametrize("p", [g for g in GRID if g.N == 2], ids=_name)
def test_criterion6_slq2(p):
    b = sl2_gen(p, "b")
    ob = omega_map(p, b)
    b2 = s_map(p, b * b) == (ob @ ob) * (p.q + p.q.inverse())
    rep = ad_invariant_check(p)
    ok = b2 and rep.all_passed and rep.results[0]["S_span_dim"] == 1
    record(6, ok, f"{_name(p)} S(b^2) {'ok' if b2 else 'bad'}, S(R_inv) dim {rep.results[0]['S_span_dim']}")
    assert ok


# -- 7 ------------------------------------------------------------------------


@pytest.mark.parametrize("p", GRID, ids=_name)
def test_criterion7_structural(p):
    checks = structural_suite(p)
    if p.N == 3:
        checks += check_antisymmetrizer(p, 3)
    bad = [c.name for c in checks if not c.ok]
    record(7, not bad, f"{_name(p)} {len(checks)} checks, {len(bad)} failures")
    assert not bad, bad


# -- 8 ------------------------------------------------------------------------


def test_criterion8_independence():
    tables = {}
    for p in GRID + GENERIC:
        k_max = 5 if p.N == 2 else 4
        tables.setdefault(p.N, {})[_name(p) + f" {p.group}"] = (
            [d for d, _ in rank_table(p, k_max)],
            biinv_table(p).dims if p.group == "SL" else None,
        )
    ok = True
    for N, rows in tables.items():
        ranks = {tuple(r) for r, _ in rows.values()}
        bis = {tuple(b) for _, b in rows.values() if b is not None}
        ok = ok and len(ranks) == 1 and len(bis) == 1
        record(8, len(ranks) == 1 and len(bis) == 1, f"N={N}: {len(rows)} calculi, one rank table, one bi-invariant table")
    assert ok, tables


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
