"""Command-line front end: deterministic JSON (or CSV) verification reports.

Exit codes: 0 every check passed, 1 some check failed, 2 usage error,
3 resource limit (a partial report is still written).
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass
from math import comb

from .braidext import EXACT_CEILING, ExactKernelRequired, lambda_dim
from .exactla import THREADS_ENV, Modular, ResourceLimitError, set_threads
from .ideals import ad_invariant_check, compare_ideals, tsygan_span
from .invariants import biinv_lambda_dims, verify_biinvariant_forms
from .qgroup import CalcParams, DegenerateCalculusError
from .report import Check, Report
from .suite import constants_checks, structural_suite

__all__ = ["main", "run", "RunConfig", "poincare_coefficients"]

COMMANDS = ("constants", "dims", "biinv", "ideals", "verify", "all")
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    N: int
    tau: str
    group: str
    branch: str
    k_max: int | None
    D: int
    mode: str
    samples: int
    seed: int
    thread_count: int | None
    output: str | None
    format: str

    def params(self) -> CalcParams:
        return CalcParams(self.N, self.tau, self.group, self.branch)

    def k_max_for(self, command: str) -> int:
        if self.k_max is not None:
            return self.k_max
        if command == "dims":
            return self.N * self.N + 1 if self.N == 2 else 4
        if command == "ideals":
            return 3
        return 4

    def mode_for(self, p: CalcParams, k: int):
        """Rank mode for degree k; ``auto`` goes modular above the exact ceiling."""
        if self.mode == "modular":
            return Modular(self.samples, self.seed)
        if self.mode == "exact" or (p.N * p.N) ** k <= EXACT_CEILING:
            return "exact"
        return Modular(self.samples, self.seed)

    def to_dict(self) -> dict:
        # thread count and output location do not affect results
        return {
            "command": self.command, "N": self.N, "tau": self.tau, "group": self.group,
            "branch": self.branch, "k_max": self.k_max, "D": self.D, "mode": self.mode,
            "samples": self.samples, "seed": self.seed,
        }


def poincare_coefficients(N: int, k_max: int) -> list[int]:
    """Coefficients of prod_{i=1..N} (1 + t^(2i-1)) up to t^k_max."""
    coeffs = [1] + [0] * k_max
    for i in range(1, N + 1):
        d = 2 * i - 1
        for k in range(k_max, d - 1, -1):
            coeffs[k] += coeffs[k - d]
    return coeffs


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qdiffcalc", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--N", type=int, default=2)
    ap.add_argument("--tau", choices=("plus", "minus"), default="plus")
    ap.add_argument("--group", choices=("SL", "GL"), default="SL")
    ap.add_argument("--branch", choices=("principal", "negative", "generic-z"), default="principal")
    ap.add_argument("--k-max", type=int, default=None, dest="k_max")
    ap.add_argument("--D", type=int, default=3, help="word-length truncation for the ideal R")
    ap.add_argument("--mode", choices=("auto", "exact", "modular"), default="auto")
    ap.add_argument("--samples", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=None, help=f"worker threads (env {THREADS_ENV})")
    ap.add_argument("--output", default=None, help="file path; default stdout")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    return ap


def parse_config(argv) -> RunConfig:
    ap = _parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as e:
        raise UsageError("invalid arguments") from e
    cfg = RunConfig(
        ns.command, ns.N, ns.tau, ns.group, ns.branch, ns.k_max, ns.D, ns.mode,
        ns.samples, ns.seed, ns.threads, ns.output, ns.format,
    )
    if cfg.format == "csv" and cfg.command != "dims":
        raise UsageError("CSV output is only available for the dims command")
    if cfg.k_max is not None and cfg.k_max < 0:
        raise UsageError("--k-max must be non-negative")
    if cfg.D < 1:
        raise UsageError("--D must be at least 1")
    if cfg.samples < 2:
        raise UsageError("--samples must be at least 2")
    if cfg.thread_count is not None and cfg.thread_count < 1:
        raise UsageError("--threads must be positive")
    try:
        cfg.params()
    except ValueError as e:
        raise UsageError(str(e)) from e
    return cfg


# -- commands ---------------------------------------------------------------------


def _constants(cfg: RunConfig, p: CalcParams, rep: Report) -> None:
    res, checks = constants_checks(p)
    rep.results.append({"section": "constants", **res})
    rep.extend(checks)


def _dims(cfg: RunConfig, p: CalcParams, rep: Report) -> list[dict]:
    k_max = cfg.k_max_for("dims")
    rows = []
    for k in range(k_max + 1):
        dim, cert = lambda_dim(p, k, cfg.mode_for(p, k))
        want = comb(p.N * p.N, k)
        row = {"section": "dims", "k": k, "dim": dim, "expected": want, "certificate": cert}
        rows.append(row)
        rep.results.append(row)
        rep.add(Check(f"rank A_{k} = C({p.N * p.N},{k})", dim == want, {"dim": dim, "expected": want}, cert))
    return rows


def _biinv(cfg: RunConfig, p: CalcParams, rep: Report) -> None:
    k_max = cfg.k_max_for("biinv")
    bd = biinv_lambda_dims(p, k_max, lambda k: cfg.mode_for(p, k))
    want = poincare_coefficients(p.N, k_max)
    rep.results.append({
        "section": "biinv", "dims": bd.dims, "expected": want,
        "tensor_dims": bd.tensor_dims, "certificates": bd.certificates,
    })
    for k, (d, w, c) in enumerate(zip(bd.dims, want, bd.certificates)):
        rep.add(Check(f"bi-invariant Lambda dim degree {k}", d == w, {"dim": d, "expected": w}, c))
    rep.extend(verify_biinvariant_forms(p, k_max))


def _ideals(cfg: RunConfig, p: CalcParams, rep: Report) -> None:
    parts = [compare_ideals(p, cfg.D, cfg.k_max_for("ideals"))]
    if p.N == 2:
        parts.append(ad_invariant_check(p))
    parts.append(tsygan_span(p))
    for sub, name in zip(parts, ["ideals", "ad_invariant", "tsygan"] if p.N == 2 else ["ideals", "tsygan"]):
        for r in sub.results:
            rep.results.append({"section": name, **r})
        rep.extend(sub.checks)


def _verify(cfg: RunConfig, p: CalcParams, rep: Report) -> None:
    rep.extend(structural_suite(p))


_SECTIONS = {
    "constants": [_constants],
    "dims": [_dims],
    "biinv": [_biinv],
    "ideals": [_ideals],
    "verify": [_verify],
    "all": [_constants, _dims, _biinv, _ideals, _verify],
}


def _render(cfg: RunConfig, rep: Report) -> str:
    if cfg.format == "json":
        return rep.to_json() + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "tau", "group", "branch", "k", "dim", "expected", "certificate"])
    for r in rep.results:
        if r.get("section") == "dims":
            w.writerow([cfg.N, cfg.tau, cfg.group, cfg.branch, r["k"], r["dim"], r["expected"], r["certificate"]])
    return buf.getvalue()


def _write(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    set_threads(cfg.thread_count)
    p = cfg.params()
    rep = Report(p.as_dict() | cfg.to_dict())
    code = None
    try:
        for section in _SECTIONS[cfg.command]:
            section(cfg, p, rep)
    except (ResourceLimitError, ExactKernelRequired) as e:
        rep.add(Check("resource limit", None, {"error": str(e)}))
        code = EXIT_RESOURCE
    except DegenerateCalculusError as e:
        rep.add(Check("non-degenerate calculus", False, {"error": str(e)}))
    _write(cfg, _render(cfg, rep))
    if code is None:
        code = EXIT_OK if rep.all_passed else EXIT_FAIL
    return code


def main() -> None:
    sys.exit(run())
