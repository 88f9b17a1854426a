import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dagas.errors import InvalidVertexError, ValidationError, WidthError
from dagas.lattice import (Lattice, MarkedGraph, ball, is_free_set,
                           lr_lattice, ln_lattice, marked_distance,
                           parse_lattice, square_lattice, tn_lattice,
                           tri_lattice)


# -- edge rules --------------------------------------------------------------

def test_children_triangular():
    assert tri_lattice().children((0, 0)) == ((-1, 1), (1, 1), (0, 2))


def test_children_lr_014():
    assert lr_lattice((0, 1, 4)).children((2, 5)) == ((2, 6), (3, 6), (6, 6))


def test_children_cylinder_wrap():
    lat = square_lattice(width=5)
    assert lat.children((4, 0)) == ((4, 1), (0, 1))


def test_children_tn_odd():
    assert tn_lattice(3).children((0, 0)) == ((-1, 1), (0, 1), (1, 1), (0, 2))


def test_children_tn_even_parity():
    lat = tn_lattice(4)
    assert lat.children((0, 0)) == ((-3, 1), (-1, 1), (1, 1), (3, 1), (0, 2))
    with pytest.raises(InvalidVertexError):
        lat.children((1, 0))


def test_parents_square():
    assert square_lattice().parents((0, 1)) == ((0, 0), (-1, 0))


def test_parents_triangular():
    assert tri_lattice().parents((0, 2)) == ((1, 1), (-1, 1), (0, 0))


def test_parents_cylinder_wrap():
    assert square_lattice(width=5).parents((0, 1)) == ((0, 0), (4, 0))


def test_invalid_vertex_parity():
    with pytest.raises(InvalidVertexError):
        tri_lattice().children((1, 0))


def test_invalid_vertex_width():
    with pytest.raises(InvalidVertexError):
        square_lattice(width=5).children((5, 0))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(["LR:0,1", "LR:0,1,4", "Tri", "Tn:3", "Tn:4",
                        "LR:0,2@N=7", "Tri@N=8", "Tn:3@N=6"]),
       st.integers(-30, 30), st.integers(-30, 30))
def test_children_parents_duality(spec, i, j):
    lat = parse_lattice(spec)
    if lat.width is not None:
        i = i % lat.width
    if lat.parity_constrained and (i + j) % 2:
        j += 1
    v = (i, j)
    for c in lat.children(v):
        assert v in lat.parents(c)
    for u in lat.parents(v):
        assert v in lat.children(u)


@given(st.sampled_from(["LR:0,1", "LR:0,3,5", "Tri", "Tn:2", "Tn:5"]),
       st.integers(-10, 10), st.integers(-10, 10))
def test_edges_increase_j_by_1_or_2(spec, i, j):
    lat = parse_lattice(spec)
    if lat.parity_constrained and (i + j) % 2:
        j += 1
    for (_, cj) in lat.children((i, j)):
        assert cj - j in (1, 2)


# -- cylinders ---------------------------------------------------------------

def test_make_cyclic_square():
    lat = square_lattice().make_cyclic(6)
    assert lat.children((5, 0)) == ((5, 1), (0, 1))


def test_make_cyclic_parity_mismatch():
    with pytest.raises(WidthError):
        tri_lattice().make_cyclic(3)


def test_make_cyclic_width_too_small():
    with pytest.raises(WidthError):
        lr_lattice((0, 1, 4)).make_cyclic(4)


def test_tn_cylinder_widths():
    with pytest.raises(WidthError):
        tn_lattice(3).make_cyclic(2)
    tn_lattice(3).make_cyclic(3)
    with pytest.raises(WidthError):
        tn_lattice(4).make_cyclic(6)
    tn_lattice(4).make_cyclic(8)


# -- spec strings --------------------------------------------------------------

@pytest.mark.parametrize("spec", ["LR:0,1,4", "LR:0,1,4@N=12", "Tri",
                                  "Tri@N=8", "Tn:3", "Tn:4@N=8"])
def test_spec_string_roundtrip(spec):
    assert parse_lattice(spec).spec_string() == spec


def test_parse_rejects_garbage():
    for bad in ("LR:", "Tn:x", "Quad", "LR:1,2"):
        with pytest.raises(ValidationError):
            parse_lattice(bad)


# -- balls and distance --------------------------------------------------------

def test_ball_radius_zero():
    b = ball(MarkedGraph(tri_lattice(), ((0, 0),)), 0)
    assert len(b.vertices) == 1
    assert b.child_lists == ((),)


def test_ball_square_radius_one():
    b = ball(MarkedGraph(square_lattice(), ((0, 0),)), 1)
    assert len(b.vertices) == 3
    assert b.child_lists == ((1, 2), (), ())


def test_ball_narrow_cylinder_differs_from_plane():
    narrow = ball(MarkedGraph(square_lattice(width=2), ((0, 0),)), 1)
    plane = ball(MarkedGraph(square_lattice(), ((0, 0),)), 1)
    assert len(narrow.vertices) == 3
    assert not narrow.isomorphic(ball(MarkedGraph(square_lattice(), ((0, 0),)), 2))
    assert narrow.isomorphic(plane)  # depth 1 sees no wrap yet
    assert not ball(MarkedGraph(square_lattice(width=2), ((0, 0),)), 2).isomorphic(
        ball(MarkedGraph(square_lattice(), ((0, 0),)), 2))


def test_distance_identical_graphs_unresolved():
    g = MarkedGraph(tri_lattice(), ((0, 0),))
    d = marked_distance(g, g, 10)
    assert not d.resolved
    assert d.value == pytest.approx(1 / 11)


def test_distance_cylinder_vs_plane():
    g1 = MarkedGraph(square_lattice(width=10), ((0, 0),))
    g2 = MarkedGraph(square_lattice(), ((0, 0),))
    d = marked_distance(g1, g2, 20)
    assert d.resolved
    assert d.r_star == 9
    assert d.r_diff == 10
    assert d.value == pytest.approx(0.1)


def test_distance_isomorphic_stretched_lattices():
    # LR({0,2}) is LR({0,1}) with abscissae doubled: the marked descendant
    # cones are isomorphic, so no radius can tell them apart
    g1 = MarkedGraph(square_lattice(), ((0, 0),))
    g2 = MarkedGraph(lr_lattice((0, 2)), ((0, 0),))
    d = marked_distance(g1, g2, 6)
    assert not d.resolved


def test_distance_mark_count_differs():
    g1 = MarkedGraph(square_lattice(), ((0, 0),))
    g2 = MarkedGraph(square_lattice(), ((0, 0), (5, 0)))
    d = marked_distance(g1, g2, 4)
    assert d.resolved and d.r_star == -1 and d.value == 1.0


def test_distance_symmetry_and_chain_consistency():
    g1 = MarkedGraph(square_lattice(width=6), ((0, 0),))
    g2 = MarkedGraph(square_lattice(), ((0, 0),))
    g3 = MarkedGraph(ln_lattice(3), ((0, 0),))
    d12 = marked_distance(g1, g2, 12)
    d21 = marked_distance(g2, g1, 12)
    assert (d12.resolved, d12.r_star, d12.value) == (d21.resolved, d21.r_star, d21.value)
    # canonical-form equality is transitive: if g1~g2 and g2~g3 at radius r
    # then g1~g3 at radius r
    for r in range(4):
        b1, b2, b3 = (ball(g, r) for g in (g1, g2, g3))
        if b1.isomorphic(b2) and b2.isomorphic(b3):
            assert b1.isomorphic(b3)


def test_ball_isomorphism_window():
    # cylinder balls match plane balls while the plane ball's abscissa span
    # r * max(R) stays below the width, and first differ right after
    for spec, rbar in (("LR:0,1", 1), ("LR:0,1,2", 2), ("LR:0,1,4", 4)):
        plane = parse_lattice(spec)
        for width in (7, 9):
            cyl = plane.make_cyclic(width)
            r = 0
            while r * rbar < width:
                bp = ball(MarkedGraph(plane, ((0, 0),)), r)
                bc = ball(MarkedGraph(cyl, ((0, 0),)), r)
                assert bp.isomorphic(bc), (spec, width, r)
                r += 1
            assert not ball(MarkedGraph(plane, ((0, 0),)), r).isomorphic(
                ball(MarkedGraph(cyl, ((0, 0),)), r)), (spec, width, r)


# -- free sets -----------------------------------------------------------------

def test_free_set_singleton():
    assert is_free_set(square_lattice(), [(0, 0)])


def test_free_set_direct_edge():
    assert not is_free_set(square_lattice(), [(0, 0), (1, 1)])


def test_free_set_unreachable_offset():
    assert is_free_set(square_lattice(), [(0, 0), (3, 1)])


def test_free_set_long_path():
    assert not is_free_set(square_lattice(), [(0, 0), (2, 4)])
    assert is_free_set(square_lattice(), [(0, 0), (5, 4)])


def test_free_set_cylinder_wraps():
    # on a narrow cylinder the path can wrap around
    assert not is_free_set(square_lattice(width=3), [(0, 0), (1, 2)])
