from qdiffcalc.ideals import ad_invariant_check, compare_ideals, quadratic_generation, sj2, tsygan_span, uj2


def test_compare_ideals(params):
    rep = compare_ideals(params, 3 if params.N == 2 else 2, 3)
    assert rep.all_passed
    if params.N == 2:
        assert (uj2(params, 3).span.dim, sj2(params).dim) == (9, 10)
        assert uj2(params, 3).status == "stable"
    else:
        assert uj2(params, 2).span.dim == sj2(params).dim == 45
        assert uj2(params, 2).status == "saturated"


def test_skipped_higher_degree_only_for_n3(params):
    rep = compare_ideals(params, 2, 3)
    skipped = [c.name for c in rep.checks if c.ok is None]
    assert skipped == (["uJ = sJ in degree >= 3"] if params.N == 3 else [])


def test_quadratic_generation(params):
    gen, ker = quadratic_generation(params, 3)
    assert gen == ker == (60 if params.N == 2 else 645)


def test_ad_invariant(params2):
    rep = ad_invariant_check(params2)
    assert rep.all_passed
    assert rep.results[0]["S_span_dim"] == 1


def test_tsygan(params):
    rep = tsygan_span(params)
    assert rep.all_passed
    assert rep.results[0]["span_dim"] == (10 if params.N == 2 else 45)
