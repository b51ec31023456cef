import json

import pytest

from qdiffcalc.cli import poincare_coefficients, run


def _run(tmp_path, *args):
    out = tmp_path / "r.out"
    code = run(list(args) + ["--output", str(out)])
    return code, out.read_text() if out.exists() else ""


def test_dims_example(tmp_path):
    code, text = _run(tmp_path, "dims", "--N", "2", "--tau", "plus", "--branch", "principal", "--k-max", "5", "--mode", "exact")
    rep = json.loads(text)
    assert code == 0
    assert [r["dim"] for r in rep["results"]] == [1, 4, 6, 4, 1, 0]
    assert set(rep) == {"tool_version", "params", "results", "checks"}
    for c in rep["checks"]:
        assert set(c) == {"name", "status", "details", "certificate"}


def test_biinv_example(tmp_path):
    code, text = _run(tmp_path, "biinv", "--N", "2", "--k-max", "4")
    rep = json.loads(text)
    assert code == 0
    assert rep["results"][0]["dims"] == [1, 1, 0, 1, 1]
    names = [c["name"] for c in rep["checks"]]
    assert any(n.startswith("closedness") for n in names)
    assert any(n.startswith("graded-commutativity") for n in names)


def test_ideals_example(tmp_path):
    code, text = _run(tmp_path, "ideals", "--N", "2", "--branch", "negative", "--D", "3")
    rep = json.loads(text)
    assert code == 0
    first = rep["results"][0]
    assert (first["uJ2_dim"], first["sJ2_dim"]) == (9, 10)
    wit = [c for c in rep["checks"] if c["name"] == "sJ2 / uJ2 spanned by nu1 (x) nu1"][0]
    assert wit["status"] == "pass" and wit["details"]["witness"] == "nu1 (x) nu1"


def test_constants_reports_f11_mismatch(tmp_path):
    code, text = _run(tmp_path, "constants", "--N", "2", "--tau", "minus")
    rep = json.loads(text)
    assert code == 1
    failed = {c["name"] for c in rep["checks"] if c["status"] == "fail"}
    assert failed == {"f11+ matches closed formula"}


def test_verify_passes(tmp_path):
    code, _ = _run(tmp_path, "verify", "--N", "2", "--tau", "minus", "--branch", "negative")
    assert code == 0


def test_deterministic_output(tmp_path):
    a = _run(tmp_path, "dims", "--N", "2", "--mode", "modular", "--seed", "4", "--threads", "1")[1]
    b = _run(tmp_path, "dims", "--N", "2", "--mode", "modular", "--seed", "4", "--threads", "3")[1]
    assert a == b
    certs = {c["certificate"] for c in json.loads(a)["checks"]}
    assert certs == {"probabilistic-lower-bound-agreed"}


def test_csv(tmp_path):
    code, text = _run(tmp_path, "dims", "--N", "3", "--k-max", "2", "--format", "csv")
    assert code == 0
    assert text.splitlines() == [
        "N,tau,group,branch,k,dim,expected,certificate",
        "3,plus,SL,principal,0,1,1,exact",
        "3,plus,SL,principal,1,9,9,exact",
        "3,plus,SL,principal,2,36,36,exact",
    ]


@pytest.mark.parametrize("args", [
    ["biinv", "--format", "csv"],
    ["dims", "--N", "3", "--branch", "negative"],
    ["dims", "--k-max", "-1"],
    ["dims", "--samples", "1"],
    ["nonsense"],
    ["dims", "--group", "GL", "--branch", "generic-z", "--tau", "sideways"],
])
def test_usage_errors(tmp_path, args):
    assert _run(tmp_path, *args)[0] == 2


def test_resource_limit_writes_partial_report(tmp_path):
    code, text = _run(tmp_path, "dims", "--N", "3", "--k-max", "4", "--mode", "exact")
    rep = json.loads(text)
    assert code == 3
    assert [r["dim"] for r in rep["results"]] == [1, 9, 36, 84]
    assert rep["checks"][-1]["status"] == "skipped"


def test_generic_z_dims(tmp_path):
    code, text = _run(tmp_path, "dims", "--N", "2", "--group", "GL", "--branch", "generic-z", "--k-max", "4")
    assert code == 0


def test_poincare_coefficients():
    assert poincare_coefficients(2, 4) == [1, 1, 0, 1, 1]
    assert poincare_coefficients(3, 9) == [1, 1, 0, 1, 1, 1, 1, 0, 1, 1]
