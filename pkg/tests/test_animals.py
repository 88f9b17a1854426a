import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dagas.animals import (enumerate_counts, max_growth_ratio,
                           series_eval_alternating)
from dagas.errors import (BudgetExceededError, DivergentBoundError,
                          NotFreeSetError, ValidationError)
from dagas.lattice import (lr_lattice, ln_lattice, parse_lattice,
                           square_lattice, tn_lattice, tri_lattice)


def test_square_singleton_counts():
    s = enumerate_counts(square_lattice(), [(0, 0)], 6)
    assert s.coeffs == (1, 2, 5, 13, 35, 96)


def test_triangular_first_counts():
    s = enumerate_counts(tri_lattice(), [(0, 0)], 2)
    assert s.coeffs == (1, 3)


def test_empty_source_counts():
    s = enumerate_counts(square_lattice(), [], 0)
    assert s.coeffs == (1,)
    assert s.source_size == 0


def test_source_itself_is_the_minimal_animal():
    s = enumerate_counts(tri_lattice(), [(0, 0), (4, 0)], 2)
    assert s.coeffs == (1,)


def test_not_free_source_rejected():
    with pytest.raises(NotFreeSetError):
        enumerate_counts(square_lattice(), [(0, 0), (1, 1)], 4)


def test_kmax_guards():
    with pytest.raises(ValidationError):
        enumerate_counts(square_lattice(), [(0, 0)], 0)
    with pytest.raises(ValidationError):
        enumerate_counts(square_lattice(), [(0, 0)], 25)


def test_node_budget_error():
    with pytest.raises(BudgetExceededError):
        enumerate_counts(tri_lattice(), [(0, 0)], 12, node_budget=100)


ORACLE_CASES = [
    ("LR:0,1", [(0, 0)]),
    ("LR:0,1", [(0, 0), (3, 0)]),
    ("LR:0,1,2", [(0, 0)]),
    ("LR:0,1,4", [(0, 0)]),
    ("LR:0,1,4", [(0, 0), (2, 1)]),
    ("Tri", [(0, 0)]),
    ("Tri", [(0, 0), (4, 0)]),
    ("Tn:3", [(0, 0)]),
    ("Tn:3", [(0, 0), (2, 0)]),
    ("Tn:4", [(0, 0)]),
    ("LR:0,1@N=3", [(0, 0)]),
    ("Tri@N=6", [(0, 0)]),
]


@pytest.mark.parametrize("spec,source", ORACLE_CASES)
def test_oracle_duality(spec, source):
    lat = parse_lattice(spec)
    kmax = len(source) + 6
    a = enumerate_counts(lat, source, kmax, method="frontier")
    b = enumerate_counts(lat, source, kmax, method="subsets")
    assert a.coeffs == b.coeffs


def test_translation_invariance():
    lat = tri_lattice()
    base = enumerate_counts(lat, [(0, 0), (4, 0)], 8)
    for (si, sj) in ((2, 0), (-3, 1), (7, -5)):
        shifted = [(i + si, j + sj) for (i, j) in ((0, 0), (4, 0))]
        if (si + sj) % 2:
            continue  # parity-preserving shifts only
        s = enumerate_counts(lat, shifted, 8)
        assert s.coeffs == base.coeffs


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["LR:0,1", "LR:0,1,2", "Tri"]),
       st.integers(-5, 5), st.integers(-5, 5))
def test_translation_invariance_property(spec, si, sj):
    lat = parse_lattice(spec)
    if lat.parity_constrained and (si + sj) % 2:
        sj += 1
    base = enumerate_counts(lat, [(0, 0)], 6)
    shifted = enumerate_counts(lat, [(si, sj)], 6)
    assert base.coeffs == shifted.coeffs


def test_cylinder_counts_match_plane_when_wide_enough():
    # counts at area <= k agree once the radius-(k-1) ball embeds
    for spec in ("LR:0,1", "LR:0,1,2"):
        plane = parse_lattice(spec)
        kmax = 7
        rbar = plane.r_set[-1]
        wide = plane.make_cyclic((kmax - 1) * rbar + 1)
        a = enumerate_counts(plane, [(0, 0)], kmax)
        b = enumerate_counts(wide, [(0, 0)], kmax)
        assert a.coeffs == b.coeffs


def test_narrow_cylinder_counts_differ():
    plane = enumerate_counts(square_lattice(), [(0, 0)], 8)
    narrow = enumerate_counts(square_lattice(width=3), [(0, 0)], 8)
    assert plane.coeffs != narrow.coeffs


def test_growth_ratio_sanity_ceiling():
    import math
    for spec in ("LR:0,1", "LR:0,1,2", "Tri", "Tn:3"):
        lat = parse_lattice(spec)
        s = enumerate_counts(lat, [(0, 0)], 9)
        assert max_growth_ratio(s) <= 4 * math.e * lat.outdegree


# -- alternating evaluation ----------------------------------------------------

def test_series_eval_example():
    from dagas.animals import CountSeries
    s = CountSeries("LR:0,1", ((0, 0),), 3, (1, 2, 5))
    value, bound = series_eval_alternating(s, 0.1)
    assert value == pytest.approx(0.085)
    assert bound == pytest.approx(5 * 2.5 * 0.1**4 / (1 - 0.25))


def test_series_eval_empty_source():
    from dagas.animals import CountSeries
    s = CountSeries("LR:0,1", (), 0, (1,))
    assert series_eval_alternating(s, 0.37) == (1.0, 0.0)


def test_series_eval_p_zero():
    from dagas.animals import CountSeries
    s = CountSeries("Tri", ((0, 0),), 2, (1, 3))
    assert series_eval_alternating(s, 0.0) == (0.0, 0.0)


def test_series_eval_divergent_bound():
    from dagas.animals import CountSeries
    s = CountSeries("Tri", ((0, 0),), 2, (1, 3))
    with pytest.raises(DivergentBoundError):
        series_eval_alternating(s, 0.5)


def test_serialization_roundtrip():
    s = enumerate_counts(square_lattice(), [(0, 0)], 5)
    d = s.to_dict()
    assert d["coeffs"] == [1, 2, 5, 13, 35]
    assert d["lattice"] == "LR:0,1"
    assert d["k_max"] == 5
