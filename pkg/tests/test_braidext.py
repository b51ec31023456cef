import itertools
from math import comb

import pytest

from qdiffcalc.braidext import (
    ExactKernelRequired,
    all_perms,
    antisymmetrizer,
    antisymmetrizer_matrix,
    compose,
    direct_signed_sum,
    from_word,
    lambda_dim,
    nu1,
    perm_length,
    product_in_lambda,
    quotient_reduce,
    reduced_word,
    shuffle_decomposition,
    shuffles,
)
from qdiffcalc.exactla import Modular
from qdiffcalc.forms import TensorForm
from qdiffcalc.qgroup import CalcParams
from qdiffcalc.suite import check_antisymmetrizer, check_sigma


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_reduced_words(k):
    for p, length in all_perms(k):
        w = reduced_word(p)
        assert len(w) == length == perm_length(p)
        assert from_word(w, k) == p


@pytest.mark.parametrize("k,i", [(3, 1), (4, 2), (5, 2)])
def test_shuffle_decomposition(k, i):
    assert len(shuffles(k, i)) == comb(k, i)
    cs = set(shuffles(k, i))
    for p, _ in all_perms(k):
        p1, p2, p3 = shuffle_decomposition(p, i)
        assert p1 in cs
        assert compose(compose(p1, p2), p3) == p
        assert perm_length(p1) + perm_length(p2) + perm_length(p3) == perm_length(p)


def test_sigma(params):
    assert all(c.ok for c in check_sigma(params))


@pytest.mark.parametrize("g", [(2, "plus", "SL", "principal"), (2, "minus", "SL", "negative")])
def test_recursion_and_shuffles_n2(g):
    checks = check_antisymmetrizer(CalcParams(*g), 4)
    assert checks and all(c.ok for c in checks)


def test_recursion_n3_degree_2(params3):
    assert antisymmetrizer_matrix(params3, 2) == direct_signed_sum(params3, 2)


def test_exact_ranks_n2(params2):
    assert [lambda_dim(params2, k)[0] for k in range(6)] == [1, 4, 6, 4, 1, 0]


def test_exact_ranks_n3(params3):
    assert [lambda_dim(params3, k)[0] for k in range(4)] == [1, 9, 36, 84]


def test_modular_agrees_with_exact(params2):
    for k in range(2, 6):
        d, cert = lambda_dim(params2, k, Modular(3, 7))
        assert d == comb(4, k)
        assert cert == "probabilistic-lower-bound-agreed"


def test_generic_z_ranks():
    p = CalcParams(2, "plus", "GL", "generic-z")
    assert [lambda_dim(p, k)[0] for k in range(5)] == [1, 4, 6, 4, 1]


def test_quotient_normal_forms(params2):
    p = params2
    n1 = nu1(p)
    # nu_1 squares to zero only up to the quotient; the normal form is idempotent
    x = n1 @ n1
    y = quotient_reduce(p, 2, x)
    assert quotient_reduce(p, 2, y) == y
    A = antisymmetrizer(p)
    assert A.apply(x.coeffs, 2) == A.apply(y.coeffs, 2)
    # graded commutativity of nu_1 with itself
    assert quotient_reduce(p, 2, product_in_lambda(p, n1, n1)).is_zero() == (not A.apply(x.coeffs, 2))


def test_quotient_above_ceiling_raises():
    p = CalcParams(3)
    with pytest.raises(ExactKernelRequired):
        quotient_reduce(p, 4, TensorForm.zero(3, 4, p.ring))
