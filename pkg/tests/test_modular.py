from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_2_unimodular, random_graph, seeded

from gbs.arith import divisors, exact_power, factorize, hermite_rows, is_prime, lcm, valuation
from gbs.graph import GraphError, LabeledGraph, bar
from gbs.modular import (fundamental_cycles, height_map, intersects_integers_trivially, is_p_unimodular,
                         is_unimodular, levels, modular_subgroup, path_modulus, subgroup_canonical)


def test_arith():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert valuation(-48, 2) == 4 and valuation(48, 4) == 2
    assert exact_power(27, 3) == 3 and exact_power(12, 2) is None
    assert lcm(4, 6, 10) == 60 and lcm() == 1
    assert [p for p in range(20) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=4),
       st.integers(0, 10 ** 6))
def test_hermite_depends_only_on_lattice(rows, seed):
    rng = seeded(seed)
    # unimodular row operations leave the lattice unchanged
    mixed = [list(r) for r in rows]
    for _ in range(5):
        if len(mixed) < 2:
            break
        i, j = rng.sample(range(len(mixed)), 2)
        k = rng.randint(-3, 3)
        mixed[i] = [a + k * b for a, b in zip(mixed[i], mixed[j])]
    rng.shuffle(mixed)
    assert hermite_rows(rows) == hermite_rows(mixed)


def test_bs_modular_subgroup():
    g = LabeledGraph.from_edges(["v"], [("t", "v", "v", 2, 3)])
    q = modular_subgroup(g)
    assert q.basis() == [Fraction(2, 3)]
    assert intersects_integers_trivially(q)
    assert not is_unimodular(g)
    assert is_p_unimodular(LabeledGraph.from_edges(["v"], [("t", "v", "v", 3, 3)]), 2)


def test_minus_one_and_integers():
    g = LabeledGraph.from_edges(["v"], [("t", "v", "v", 2, -2)])
    assert modular_subgroup(g).has_minus_one()
    assert not intersects_integers_trivially(modular_subgroup(g))
    # <2/3, 3> contains 3
    assert not intersects_integers_trivially(subgroup_canonical([Fraction(2, 3), Fraction(3)]))
    # <2/3, 5/7> meets Z trivially; exercises the rank-2 LP
    assert intersects_integers_trivially(subgroup_canonical([Fraction(2, 3), Fraction(5, 7)]))
    # <4/9, 2/3> has rank 1 after canonicalisation
    s = subgroup_canonical([Fraction(4, 9), Fraction(2, 3)])
    assert s.rank() == 1 and s == subgroup_canonical([Fraction(2, 3)])


def test_path_modulus_needs_composable_path():
    g = LabeledGraph.from_edges(["a", "b"], [("e", "a", "b", 2, 3)])
    assert path_modulus(g, ["e", "~e"]) == 1
    with pytest.raises(GraphError):
        path_modulus(g, ["e", "e"])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_subgroup_independent_of_generators(seed):
    g = random_graph(seeded(seed), signs=True)
    q = modular_subgroup(g)
    for c in fundamental_cycles(g):
        assert g.origin(c[0]) == g.terminus(c[-1])
        assert q.contains(path_modulus(g, c))
        assert q.contains(1 / path_modulus(g, c))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_height_map_on_unimodular(seed):
    g = random_2_unimodular(seeded(seed))
    assert is_p_unimodular(g, 2)
    h = height_map(g, 2)
    for e in g.half_edges:
        drop = valuation(g.label(e), 2) - valuation(g.label(bar(e)), 2)
        assert h[g.terminus(e)] - h[g.origin(e)] == drop


def test_height_map_rejects():
    g = LabeledGraph.from_edges(["v"], [("t", "v", "v", 2, 1)])
    with pytest.raises(GraphError):
        height_map(g, 2)
    with pytest.raises(ValueError):
        height_map(g, 4)


def test_levels():
    g = LabeledGraph.from_edges(["v"], [("t", "v", "v", 1, 9), ("a", "v", "v", 3, 3)])
    vl, el = levels(g, 3, 2)
    assert vl == {"v": 0} and el["a"] == 1 and el["t"] == 0
    with pytest.raises(GraphError):
        levels(g, 3, 3)
