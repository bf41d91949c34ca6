import pytest
from hypothesis import assume, given, settings, strategies as st

from gbs.covering import cyclic_unwind
from gbs.crkz import (CnlPresentation, CrkzVector, check_witness, cnl_commensurable, cnl_isomorphic, crkz_vector,
                      cyclic_scalar_equivalent, expected_witness_bouquet, least_rotation, parse_presentation,
                      rotate, scaling_check, serialize_presentation, unit_loop)
from gbs.families import loop_multiset
from gbs.graph import GraphError, LabeledGraph, check_isomorphism


def test_rotations():
    assert rotate((1, 2, 3), 1) == (2, 3, 1)
    assert least_rotation((3, 1, 2)) == (1, 2, 3)
    v = CrkzVector((2, 4, 0), 2, 3)
    assert v == CrkzVector((0, 2, 4), 2, 3) and str(v) == "2(1, 2, 0)"
    assert v.scaled(3).entries == (6, 12, 0)


def test_bouquet_vector():
    p = CnlPresentation(2, 3, (1, 1, 2))
    # level 0: e1 both ends minus the vertex; petals at levels 1, 1, 2
    assert p.vector().entries == (0, 4, 2)
    assert p.counts() == (0, 2, 1) and p.k == 4
    assert str(p) == "A(2,3;1,1,2)"


def test_presentation_file():
    p = CnlPresentation(3, 2, (0, 1))
    assert parse_presentation("# c\n" + serialize_presentation(p)) == p
    for bad in ("cnl: 2 3", "xyz: 1", "", "cnl: 2 3 5"):
        with pytest.raises(ValueError):
            parse_presentation(bad)


def test_scalar_equivalence():
    a = CrkzVector((0, 4, 2), 2, 3)
    b = CrkzVector((12, 6, 0), 2, 3)
    sr = cyclic_scalar_equivalent(a, b)
    assert (sr.c1, sr.c2) == (3, 1)
    assert tuple(3 * x for x in a.entries) == rotate(b.entries, sr.rotation)
    assert cyclic_scalar_equivalent(a, CrkzVector((1, 2, 0), 2, 3)) is None
    assert cyclic_scalar_equivalent(CrkzVector((0, 0), 2, 2), CrkzVector((0, 0), 2, 2)).degenerate
    with pytest.raises(ValueError):
        cyclic_scalar_equivalent(a, CrkzVector((1, 1), 2, 2))


def test_levels_must_exist():
    g = LabeledGraph.from_edges(["v"], [("t", "v", "v", 1, 3)])
    with pytest.raises(GraphError):
        crkz_vector(g, 2, 2)


def test_worked_commensurable_pair():
    p1, p2 = CnlPresentation(2, 3, (1, 1, 2)), CnlPresentation(2, 3, (1,) * 6 + (2,) * 3)
    dec = cnl_commensurable(p1, p2)
    assert dec and (dec.scalars.c1, dec.scalars.c2) == (3, 1)
    assert loop_multiset(dec.sides[0].bouquet) == sorted([(1, 8)] + [(1, 1)] * 6 + [(2, 2)] * 3)
    assert check_isomorphism(dec.sides[0].bouquet, dec.sides[1].bouquet, *dec.isomorphism)
    assert check_witness(dec) == []


def test_rotated_pair():
    # X = 2(0, 2, 1) vs (4, 2, 0): a rotation, so the second side needs an induction
    p1, p2 = CnlPresentation(2, 3, (1, 1, 2)), CnlPresentation(2, 3, (0, 0, 1))
    dec = cnl_commensurable(p1, p2)
    assert dec and dec.scalars.rotation != 0
    assert dec.sides[1].align_script.startswith("induction e1")
    assert check_witness(dec) == []


def test_incommensurable_pair():
    dec = cnl_commensurable(CnlPresentation(2, 3, (1,)), CnlPresentation(2, 3, (1, 2)))
    assert not dec and "no c1, c2" in dec.obstruction
    with pytest.raises(ValueError):
        cnl_commensurable(CnlPresentation(2, 3, (1,)), CnlPresentation(3, 3, (1,)))


def test_isomorphic():
    assert cnl_isomorphic(CnlPresentation(2, 3, (1, 2)), CnlPresentation(2, 3, (2, 1)))
    assert not cnl_isomorphic(CnlPresentation(2, 3, (1, 2)), CnlPresentation(2, 3, (1, 1)))


def test_expected_witness_bouquet():
    assert expected_witness_bouquet((0, 2, 1), 1, 1, 2, 3) == sorted([(1, 8), (1, 1), (1, 1), (2, 2)])


def test_unit_loop():
    g = CnlPresentation(2, 2, (1,)).graph()
    assert unit_loop(g) == "e1"
    assert unit_loop(LabeledGraph.from_edges(["v"], [("t", "v", "v", 2, 2)])) is None


presentations = st.builds(
    lambda n, l, a: CnlPresentation(n, l, tuple(x % l for x in a)),
    st.sampled_from([2, 3]), st.integers(1, 3), st.lists(st.integers(0, 5), min_size=1, max_size=4))


@settings(max_examples=40, deadline=None)
@given(presentations, st.integers(1, 4), st.data())
def test_unwinding_scales_vector(p, c, data):
    g = p.graph()
    loop = data.draw(st.sampled_from(list(g.edges)))
    cov = cyclic_unwind(g, loop, c)
    diags = scaling_check(g, p.n, p.l, cov)
    assert diags == [] or diags == ["g has a proper plateau; scaling is not guaranteed"]
    assert crkz_vector(cov.source, p.n, p.l) == p.vector().scaled(c)


@settings(max_examples=25, deadline=None)
@given(presentations, st.integers(1, 3), st.integers(1, 3), st.data())
def test_decision_is_sound(p, c1, c2, data):
    # a presentation is commensurable with itself; the witness always replays
    dec = cnl_commensurable(p, p)
    assert dec and check_witness(dec) == []
    q = CnlPresentation(p.n, p.l, data.draw(st.lists(st.integers(0, p.l - 1), min_size=1, max_size=4).map(tuple)))
    dec = cnl_commensurable(p, q)
    if dec:
        assert check_witness(dec) == []
    else:
        assert cyclic_scalar_equivalent(p.vector(), q.vector()) is None
