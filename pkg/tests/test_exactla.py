import flint
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdiffcalc.exactla import (
    EchelonBuilder,
    Modular,
    ResourceLimitError,
    SparseMat,
    Subspace,
    parallel_map,
    random_prime,
    rank_kernel,
    rank_mod_p,
    set_threads,
    subspace_ops,
    thread_count,
)
from qdiffcalc.scalars import RING_T

small = st.integers(-3, 3)


def int_matrices(max_side=6):
    return st.integers(1, max_side).flatmap(
        lambda r: st.integers(1, max_side).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def to_sparse(rows):
    return SparseMat.from_dense([[RING_T(v) for v in row] for row in rows], RING_T)


@given(int_matrices())
@settings(max_examples=60, deadline=None)
def test_rank_matches_flint(rows):
    m = to_sparse(rows)
    res = rank_kernel(m)
    assert res.rank == flint.fmpq_mat(rows).rank()
    assert res.rank + res.kernel.dim == m.cols
    for v in res.kernel.basis:
        assert not m.apply(v)


@given(int_matrices())
@settings(max_examples=40, deadline=None)
def test_modular_rank_is_lower_bound(rows):
    exact = rank_kernel(to_sparse(rows)).rank
    mod = rank_kernel(to_sparse(rows), Modular(2, 3))
    assert mod.rank <= exact
    assert mod.certificate.startswith("probabilistic")


def test_modular_rank_symbolic_matrix():
    t = RING_T.gen()
    m = SparseMat.from_dense([[t, t * t], [RING_T.one, t], [t + 1, t * t + t]], RING_T)
    assert rank_kernel(m).rank == 1
    assert rank_kernel(m, Modular(3, 0)).rank == 1


@given(int_matrices(5), int_matrices(5))
@settings(max_examples=40, deadline=None)
def test_subspace_dimension_formula(a, b):
    n = 6
    A = Subspace(n, RING_T, [{j: RING_T(v) for j, v in enumerate(row) if v} for row in a])
    B = Subspace(n, RING_T, [{j: RING_T(v) for j, v in enumerate(row) if v} for row in b])
    s = subspace_ops("sum", A, B)
    i = subspace_ops("intersect", A, B)
    assert s.dim + i.dim == A.dim + B.dim
    assert all(A.contains(v) and B.contains(v) for v in i.basis)
    assert subspace_ops("equals", s, subspace_ops("sum", B, A))


def test_echelon_builder_membership():
    bld = EchelonBuilder(3, RING_T)
    assert bld.add({0: RING_T(1), 1: RING_T(2)})
    assert not bld.add({0: RING_T(2), 1: RING_T(4)})
    assert bld.contains({0: RING_T(3), 1: RING_T(6)})
    assert not bld.contains({2: RING_T(1)})
    assert len(bld) == 1


@given(int_matrices(8))
@settings(max_examples=40, deadline=None)
def test_rank_mod_p_matches_exact_small_entries(rows):
    p = 2147483659
    arr = np.array(rows, dtype=np.int64) % p
    assert rank_mod_p(arr, p) == flint.fmpq_mat(rows).rank()


def test_random_prime_range():
    import random

    rng = random.Random(1)
    for _ in range(5):
        p = random_prime(rng)
        assert 2 ** 31 < p < 3_037_000_000
        assert flint.fmpz(p).is_prime()


def test_exact_limit_raises():
    m = SparseMat(5000, 5000, RING_T)
    with pytest.raises(ResourceLimitError):
        rank_kernel(m)


def test_thread_override(monkeypatch):
    monkeypatch.setenv("QDIFFCALC_THREADS", "3")
    set_threads(None)
    assert thread_count() == 3
    set_threads(2)
    assert thread_count() == 2
    assert parallel_map(lambda x: x * x, [1, 2, 3]) == [1, 4, 9]
    set_threads(None)
