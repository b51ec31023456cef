import pytest

from qdiffcalc.exactla import SparseMat
from qdiffcalc.qgroup import CalcParams, DegenerateCalculusError, hecke_projectors, rhat, structure_constants
from qdiffcalc.suite import check_ltables, check_right_action, check_rhat, theta_closed_form


def test_rhat_identities(params):
    assert all(c.ok for c in check_rhat(params))


def test_hecke_projectors_are_complementary_idempotents():
    p = CalcParams(3)
    Pp, Pm = hecke_projectors(3, p.q)
    I = SparseMat.identity(9, p.ring)
    assert Pp + Pm == I
    assert Pp @ Pp == Pp and Pm @ Pm == Pm
    assert (Pp @ Pm).is_zero()
    # ranks of the symmetric and antisymmetric parts
    assert sum(Pp[(i, i)] for i in range(9)) == p.ring(6)
    assert sum(Pm[(i, i)] for i in range(9)) == p.ring(3)


def test_l_functionals(params):
    assert all(c.ok for c in check_ltables(params))


def test_right_action_identities(params):
    assert all(c.ok for c in check_right_action(params))


def test_theta_closed_form_n2(params2):
    sc = structure_constants(params2)
    assert sc.theta_tau == theta_closed_form(params2)


def test_branch_parameters():
    p = CalcParams(2, "plus", "SL", "negative")
    assert p.x ** 2 == p.q and p.y ** 2 == p.q
    assert p.z == (p.x * p.y) ** -1
    g = CalcParams(3, "minus", "GL", "generic-z")
    assert g.y == g.z and g.x == g.ring.one


def test_qnumber_convention():
    sc = structure_constants(CalcParams(2))
    q = sc.q
    assert sc.qnum(2) == q ** -2 + q ** -4
    assert sc.Q == q - q.inverse()


@pytest.mark.parametrize("args", [(1,), (3, "plus", "SL", "negative"), (2, "zero"), (2, "plus", "SL", "generic-z")])
def test_invalid_parameters(args):
    with pytest.raises(ValueError):
        CalcParams(*args)


def test_degenerate_error_type():
    assert issubclass(DegenerateCalculusError, ValueError)
