import sys

import pytest

from qdiffcalc.qgroup import CalcParams

# every supported (N, tau, group, branch) combination with exact coefficients
GRID = [
    (2, "plus", "SL", "principal"),
    (2, "plus", "SL", "negative"),
    (2, "minus", "SL", "principal"),
    (2, "minus", "SL", "negative"),
    (3, "plus", "SL", "principal"),
    (3, "minus", "SL", "principal"),
]
GRID_N2 = [g for g in GRID if g[0] == 2]
GRID_N3 = [g for g in GRID if g[0] == 3]


def ident(g):
    return f"N{g[0]}-{g[1]}-{g[2]}-{g[3]}"


@pytest.fixture(params=GRID, ids=ident)
def params(request):
    return CalcParams(*request.param)


@pytest.fixture(params=GRID_N2, ids=ident)
def params2(request):
    return CalcParams(*request.param)


@pytest.fixture(params=GRID_N3, ids=ident)
def params3(request):
    return CalcParams(*request.param)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
