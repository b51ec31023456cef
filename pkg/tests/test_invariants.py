import pytest

from qdiffcalc.braidext import nu1
from qdiffcalc.coordalg import SLq2, coinvariant_dim
from qdiffcalc.exactla import Modular
from qdiffcalc.fodc import omega2
from qdiffcalc.invariants import (
    all_generators,
    biinv_lambda_dims,
    biinvariant_basis,
    uq_action,
    verify_biinvariant_forms,
)
from qdiffcalc.qgroup import CalcParams


def test_pi_fixes_nu1_and_omega2(params):
    for x in (nu1(params), omega2(params)):
        for s, i, j in all_generators(params.N):
            y = uq_action(params, s, (i, j), x)
            assert y == (x if i == j else x * 0)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_tensor_biinvariants_match_coordinate_algebra(params2, k):
    # independent oracle: coinvariants of the right coaction computed in SL_q(2)
    assert biinvariant_basis(params2, k).dim == coinvariant_dim(params2, k)


def test_tensor_biinvariant_dims_n2(params2):
    assert [biinvariant_basis(params2, k).dim for k in range(5)] == [1, 1, 2, 5, 14]


def test_tensor_biinvariant_dims_n3():
    p = CalcParams(3)
    assert [biinvariant_basis(p, k).dim for k in range(4)] == [1, 1, 2, 6]


def test_slq2_relations():
    p = CalcParams(2)
    alg = SLq2(p)
    a, b, c, d = (alg.gen(x) for x in [(0, 0), (0, 1), (1, 0), (1, 1)])
    q = p.q
    # determinant ad - q bc = 1
    ad = alg.mul(a, d)
    qbc = {e: v * q for e, v in alg.mul(b, c).items()}
    diff = dict(ad)
    for e, v in qbc.items():
        diff[e] = diff.get(e, p.ring.zero) - v
    assert {e: v for e, v in diff.items() if v} == {(0, 0, 0, 0): p.ring.one}
    assert alg.mul(b, a) == {e: v * q.inverse() for e, v in alg.mul(a, b).items()}


def test_lambda_biinv_dims_n2(params2):
    bd = biinv_lambda_dims(params2, 4)
    assert bd.dims == [1, 1, 0, 1, 1]
    assert set(bd.certificates) == {"exact"}


def test_lambda_biinv_dims_n3_exact(params3):
    assert biinv_lambda_dims(params3, 3).dims == [1, 1, 0, 1]


def test_lambda_biinv_modular_n2():
    p = CalcParams(2)
    bd = biinv_lambda_dims(p, 4, lambda k: Modular(3, 4))
    assert bd.dims == [1, 1, 0, 1, 1]


def test_biinvariant_form_checks_n2(params2):
    checks = verify_biinvariant_forms(params2, 4)
    assert checks and all(c.ok for c in checks)
