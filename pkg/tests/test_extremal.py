from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from treespread.clique import max_clique
from treespread.errors import InvalidInput, OutOfScope, ResourceLimit
from treespread.extremal import (
    ConstructionSpec,
    best_trivial_forest,
    compatibility_graph,
    construct,
    constructions_for,
    matching_bound,
    max_t_intersecting_exact,
    restriction_size_classification,
    tree_shape,
    verify_main_bound,
)
from treespread.family import is_t_intersecting, spanning_tree_family
from treespread.trees import Forest, LabeledTree, enumerate_trees, path, star

from oracles import brute_trees, lattice_max_intersecting


def brute_clique(adj):
    n = len(adj)
    for k in range(n, 0, -1):
        for combo in itertools.combinations(range(n), k):
            if all(adj[a] >> b & 1 for a, b in itertools.combinations(combo, 2)):
                return k
    return 0


# ----------------------------------------------------------- clique solver

@settings(max_examples=80, deadline=None)
@given(st.integers(1, 11), st.data())
def test_max_clique_matches_brute_force(n, data):
    adj = [0] * n
    for a, b in itertools.combinations(range(n), 2):
        if data.draw(st.booleans()):
            adj[a] |= 1 << b
            adj[b] |= 1 << a
    res = max_clique(adj)
    assert res.exact
    assert len(res.clique) == brute_clique(adj)
    assert all(adj[a] >> b & 1 for a, b in itertools.combinations(res.clique, 2))


def test_max_clique_budget_and_floor():
    n = 30
    rng = random.Random(2)
    adj = [0] * n
    for a, b in itertools.combinations(range(n), 2):
        if rng.random() < 0.7:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
    full = max_clique(adj)
    limited = max_clique(adj, budget=3)
    assert not limited.exact and len(limited.clique) <= len(full.clique)
    nothing = max_clique(adj, floor=len(full.clique))
    assert nothing.exact and nothing.clique == ()


# ----------------------------------------------------------- constructions

def test_construction_examples():
    assert len(construct(ConstructionSpec("disjoint-edges", 4, 2))) == 4
    assert len(construct(ConstructionSpec("star-plus-edge", 5))) == 53
    stars = construct(ConstructionSpec("all-stars", 5))
    assert len(stars) == 5 and is_t_intersecting(stars, 1)
    with pytest.raises(InvalidInput):
        ConstructionSpec("disjoint-edges", 5, 3)
    with pytest.raises(InvalidInput):
        ConstructionSpec("star-plus-edge", 2)
    with pytest.raises(InvalidInput):
        ConstructionSpec("nonsense", 5)


@pytest.mark.parametrize("n", range(2, 9))
def test_disjoint_edges_size(n):
    for t in range(0, n // 2 + 1):
        if n <= 6:
            fam = construct(ConstructionSpec("disjoint-edges", n, t))
            assert len(fam) == matching_bound(n, t)
            assert is_t_intersecting(fam, t)
        else:
            f = Forest.of(n, [(2 * i + 1, 2 * i + 2) for i in range(t)])
            assert restriction_size_classification(f, t).size == matching_bound(n, t)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_star_plus_edge(n):
    fam = construct(ConstructionSpec("star-plus-edge", n))
    assert len(fam) == 2 * n ** (n - 3) + n - 2
    assert is_t_intersecting(fam, 1)


# ----------------------------------------------------------- classification

def test_classification_examples():
    c = restriction_size_classification(Forest.of(6, [(1, 2), (3, 4), (5, 6)]), 3)
    assert (c.size, c.matching_case, c.bound) == (48, True, 48)
    c = restriction_size_classification(Forest.of(6, [(1, 2), (2, 3)]), 2)
    assert c.size == 108 and c.bound == 108 and not c.matching_case
    c = restriction_size_classification(Forest.of(6, [(1, 2), (2, 3), (3, 4)]), 3)
    assert c.size == 24 and c.bound == 36
    with pytest.raises(OutOfScope):
        restriction_size_classification(Forest.of(5, [(1, 2), (2, 3), (3, 4)]), 3)
    with pytest.raises(InvalidInput):
        restriction_size_classification(Forest.of(6, [(1, 2)]), 2)


# ----------------------------------------------------------- shapes and best trivial

def test_tree_shape_classes():
    for n, classes in [(4, 2), (5, 3), (6, 6), (7, 11)]:
        assert len({tree_shape(t) for t in enumerate_trees(n)}) == classes
    assert tree_shape(star(5, 1)) == tree_shape(star(5, 3))
    assert tree_shape(star(5)) != tree_shape(LabeledTree.of(5, path(5).edges))


def test_best_trivial_forest():
    f = best_trivial_forest(6, 3)
    assert f is not None and len(f.edges) == 3
    assert max(
        restriction_size_classification(Forest.of(6, es), 3).size
        for es in itertools.combinations([(1, 2), (3, 4), (5, 6), (2, 3), (4, 5)], 3)
        if _acyclic(6, es)
    ) <= len(spanning_tree_family(6, f))
    assert best_trivial_forest(4, 4) is None


def _acyclic(n, es):
    try:
        Forest.of(n, es)
        return True
    except InvalidInput:
        return False


# ----------------------------------------------------------- exact search

def test_extremal_trivial_cases():
    for n in (3, 4, 5):
        assert max_t_intersecting_exact(n, 0).exact_max == n ** (n - 2)
        assert max_t_intersecting_exact(n, n - 1).exact_max == 1
    rep = max_t_intersecting_exact(4, 2)
    assert rep.exact and rep.exact_max >= 4
    with pytest.raises(ResourceLimit):
        max_t_intersecting_exact(7, 2)
    with pytest.raises(InvalidInput):
        max_t_intersecting_exact(4, 4)


@pytest.mark.parametrize("t", range(0, 4))
def test_extremal_n4_matches_subset_lattice(t):
    members = list(brute_trees(4))
    rep = max_t_intersecting_exact(4, t)
    assert rep.exact
    assert rep.exact_max == lattice_max_intersecting(members, t)
    assert is_t_intersecting(rep.witness_family, t)
    assert len(rep.witness_family) == rep.exact_max


def test_extremal_at_least_constructions():
    for n, t in [(5, 1), (5, 2), (5, 3)]:
        rep = max_t_intersecting_exact(n, t)
        cons = constructions_for(n, t)
        assert rep.exact
        assert rep.exact_max >= max(len(f) for f in cons.values())
        for fam in cons.values():
            assert is_t_intersecting(fam, t)


def test_budget_gives_lower_bound():
    rep = max_t_intersecting_exact(5, 2, budget=1)
    assert not rep.exact
    assert rep.exact_max >= rep.construction_size


def test_verify_bound_examples():
    rep = verify_main_bound(4, 2)
    assert rep.paper_bound == 4 and rep.construction_size == 4 and rep.exact
    rep = verify_main_bound(5, 1)
    assert rep.paper_bound == 50 and rep.construction_size == 53
    assert rep.construction_exceeds_bound and not rep.within_bound
    rep = verify_main_bound(4, 3)
    assert rep.exact_max == 1 and rep.paper_bound == 2 and rep.within_bound
    assert matching_bound(4, 3) == Fraction(2)


def test_compatibility_graph_symmetric():
    masks = [0b0011, 0b0110, 0b1100, 0b1001]
    adj = compatibility_graph(masks, 1)
    assert adj == [0b1010, 0b0101, 0b1010, 0b0101]
