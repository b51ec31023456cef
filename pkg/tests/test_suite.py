from qdiffcalc.suite import check_dtilde, check_equivariance, structural_suite


def test_structural_suite(params):
    checks = structural_suite(params)
    bad = [c.name for c in checks if not c.ok]
    assert not bad


def test_dtilde_degrees(params):
    names = [c.name for c in check_dtilde(params)]
    assert len(names) == (4 if params.N == 2 else 2)


def test_equivariance_other_seed(params2):
    assert all(c.ok for c in check_equivariance(params2, 3, samples=4, seed=11))
