from __future__ import annotations

import itertools
import math
import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from treespread.errors import InvalidInput, ResourceLimit
from treespread.trees import (
    Edge,
    Forest,
    LabeledTree,
    all_forests,
    count_containing,
    count_containing_avoiding,
    count_star_like_trees,
    edge_from_rank,
    enumerate_trees,
    is_star_like,
    matching,
    matrix_tree_count,
    parse_edge,
    path,
    prufer_decode,
    prufer_encode,
    sample_tree_containing,
    sample_trees_containing,
    star,
    star_like_bound,
    star_like_witness,
    tree_degree_weight_sum,
)

from oracles import brute_count, brute_trees, degree_weight_sum, edge_rank, has_cycle


def forests_strategy(max_n=6):
    @st.composite
    def build(draw):
        n = draw(st.integers(2, max_n))
        pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
        picked = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=n - 1))
        edges = []
        for e in picked:
            if not has_cycle(n, edges + [e]):
                edges.append(e)
        return Forest.of(n, edges)

    return build()


# ----------------------------------------------------------------- basics

def test_edge_rank_matches_lexicographic_position():
    for n in range(2, 8):
        for u in range(1, n + 1):
            for v in range(u + 1, n + 1):
                r = Edge(u, v).rank(n)
                assert r == edge_rank(u, v, n)
                assert edge_from_rank(r, n) == Edge(u, v)


@pytest.mark.parametrize("token", ["2-5", "5-2", "2,5", "25"])
def test_parse_edge_forms(token):
    assert parse_edge(token) == Edge(2, 5)


def test_forest_rejects_cycles_and_loops():
    with pytest.raises(InvalidInput):
        Forest.of(3, [(1, 2), (2, 3), (1, 3)])
    with pytest.raises(InvalidInput):
        Forest.of(3, [(2, 2)])
    with pytest.raises(InvalidInput):
        Forest.of(3, [(1, 4)])


def test_components_include_isolated_vertices():
    f = Forest.of(5, [(1, 2), (2, 3)])
    assert f.components() == [(1, 2, 3), (4,), (5,)]
    assert sorted(f.component_sizes()) == [1, 1, 3]


def test_labeled_tree_needs_n_minus_1_edges():
    with pytest.raises(InvalidInput):
        LabeledTree.of(4, [(1, 2), (3, 4)])


# ----------------------------------------------------------------- Prüfer

def test_prufer_examples():
    assert prufer_encode(path(3)) == [2]
    assert prufer_encode(LabeledTree.of(2, [(1, 2)])) == []
    assert prufer_encode(star(5)) == [1, 1, 1]
    assert prufer_decode([], 2).edges == {Edge(1, 2)}
    assert prufer_decode([2], 3).edges == {Edge(1, 2), Edge(2, 3)}


def test_prufer_n4_sequences_give_16_distinct_trees():
    trees = {prufer_decode(list(s), 4).edges for s in itertools.product(range(1, 5), repeat=2)}
    assert len(trees) == 16
    assert trees == set(brute_trees(4))


@pytest.mark.parametrize("n", range(2, 6))
def test_prufer_bijection_exhaustive(n):
    for seq in itertools.product(range(1, n + 1), repeat=n - 2):
        assert prufer_encode(prufer_decode(list(seq), n)) == list(seq)
    for t in brute_trees(n):
        assert prufer_decode(prufer_encode(LabeledTree.of(n, t)), n).edges == t


@pytest.mark.parametrize("n", range(2, 9))
def test_prufer_bijection_random(n):
    rng = random.Random(n)
    for _ in range(1000):
        seq = [rng.randint(1, n) for _ in range(n - 2)]
        tree = prufer_decode(seq, n)
        assert prufer_encode(tree) == seq
        assert prufer_decode(prufer_encode(tree), n) == tree


def test_prufer_errors():
    with pytest.raises(InvalidInput):
        prufer_decode([1, 2], 3)
    with pytest.raises(InvalidInput):
        prufer_decode([5], 3)
    with pytest.raises(InvalidInput):
        prufer_encode(LabeledTree.of(1, []))


# ----------------------------------------------------------------- enumeration

def test_enumerate_examples():
    assert len(list(enumerate_trees(4))) == 16
    assert len(list(enumerate_trees(4, [(1, 2)]))) == 8
    assert len(list(enumerate_trees(4, [(1, 2)], [(3, 4)]))) == 4


@pytest.mark.parametrize("n", range(2, 7))
def test_enumeration_matches_brute_force_filter(n):
    got = [t.edges for t in enumerate_trees(n)]
    assert len(got) == len(set(got)) == n ** (n - 2)
    assert set(got) == set(brute_trees(n))


def test_enumeration_is_prufer_lexicographic():
    for contains in ([], [(1, 2)], [(2, 3), (4, 5)]):
        codes = [prufer_encode(t) for t in enumerate_trees(5, contains)]
        assert codes == sorted(codes)


def test_enumeration_cap_and_overlap():
    with pytest.raises(ResourceLimit):
        next(enumerate_trees(11))
    with pytest.raises(InvalidInput):
        next(enumerate_trees(4, [(1, 2)], [(1, 2)]))


# ----------------------------------------------------------------- counting

def test_count_examples():
    assert count_containing(Forest.of(4, [])) == 16
    assert count_containing(Forest.of(4, [(1, 2)])) == 8
    assert count_containing(Forest.of(4, [(1, 2), (3, 4)])) == 4
    for n in range(2, 8):
        assert count_containing(path(n)) == 1
    assert matrix_tree_count(5, []) == 125
    assert matrix_tree_count(4, [(1, 2)]) == 8
    assert matrix_tree_count(6, [(1, 2), (3, 4), (5, 6)]) == 48


@pytest.mark.parametrize("n", range(1, 7))
def test_three_way_oracle_on_all_forests(n):
    for f in all_forests(n):
        c = count_containing(f)
        assert c == matrix_tree_count(n, f)
        if n <= 5 or len(f.edges) >= 2:
            assert c == brute_count(n, f.edges)


def test_avoiding_examples():
    f = Forest.of(4, [(1, 2)])
    assert count_containing_avoiding(f, []) == count_containing(f)
    assert count_containing_avoiding(f, [(3, 4)]) == 4
    assert count_containing_avoiding(Forest.of(4, []), [(1, 2)]) == 8


@settings(max_examples=150, deadline=None)
@given(forests_strategy(6), st.data())
def test_inclusion_exclusion_matches_filter(f, data):
    free = [Edge(u, v) for u in range(1, f.n + 1) for v in range(u + 1, f.n + 1) if Edge(u, v) not in f.edges]
    avoid = data.draw(st.lists(st.sampled_from(free), unique=True, max_size=min(4, len(free)))) if free else []
    got = count_containing_avoiding(f, avoid)
    assert got == brute_count(f.n, f.edges, avoid)
    if free:
        extra = data.draw(st.sampled_from(free))
        assert count_containing_avoiding(f, set(avoid) | {extra}) <= got


# ----------------------------------------------------------------- star-like

def test_star_like_examples():
    assert not is_star_like(matching(8, 4), 12)
    for n in range(4, 9):
        assert is_star_like(star(n), 2)
    assert not is_star_like(path(6), 2)
    assert star_like_witness(path(6), 2) is None
    w = star_like_witness(star(5), 2)
    assert w is not None and 1 in w


def test_star_like_infinite_c_counts_all_trees():
    for n in range(3, 7):
        assert count_star_like_trees(n, math.inf).exact == n ** (n - 2)


@pytest.mark.parametrize("n,c", [(4, 2), (6, 3), (5, 2), (7, 3)])
def test_star_like_count_by_brute_force(n, c):
    def qualifies(t):
        deg = Counter(x for e in t for x in e)
        return any((deg[u] + deg[v] - 2) * c >= n for u, v in t)

    res = count_star_like_trees(n, c)
    assert res.exact == sum(1 for t in brute_trees(n) if qualifies(t))
    assert res.exact <= res.paper_bound


def test_star_like_bound_is_exact_ceiling():
    # 2^6 6^(6 - 1) = 2^6 6^5 for c = 3
    assert star_like_bound(6, 3) == 2 ** 6 * 6 ** 5
    # irrational case: compare against high-precision float
    for n, c in [(5, 2), (7, 3), (8, 3)]:
        b = star_like_bound(n, c)
        approx = 2 ** n * n ** (n - n / (2 * c))
        assert b - 1 < approx <= b + 1e-6


# ----------------------------------------------------------------- degree identity

def test_degree_weight_examples():
    assert tree_degree_weight_sum(3, [1, 1, 1]) == 3
    assert tree_degree_weight_sum(4, [2, 1, 1, 1]) == 50
    assert tree_degree_weight_sum(2, [3, 7]) == 21


@pytest.mark.parametrize("n", range(2, 7))
def test_degree_weight_against_brute_force(n):
    rng = random.Random(100 + n)
    for _ in range(5):
        w = [rng.randint(1, 10) for _ in range(n)]
        assert tree_degree_weight_sum(n, w, "enumerate") == degree_weight_sum(n, w)
        assert tree_degree_weight_sum(n, w, "closed") == degree_weight_sum(n, w)


# ----------------------------------------------------------------- sampling

def test_sampler_spanning_forest_is_fixed():
    p = path(6)
    for seed in range(5):
        assert sample_tree_containing(p, seed).edges == p.edges


def test_sampler_determinism():
    f = Forest.of(6, [(1, 2)])
    a = [t.edges for t in sample_trees_containing(f, 20, 9)]
    b = [t.edges for t in sample_trees_containing(f, 20, 9)]
    assert a == b


@settings(max_examples=60, deadline=None)
@given(forests_strategy(7), st.integers(0, 10 ** 6))
def test_sampler_output_contains_forest(f, seed):
    t = sample_tree_containing(f, seed)
    assert t.is_spanning_tree()
    assert f.edges <= t.edges


def test_sampler_support_matches_enumeration():
    f = Forest.of(4, [(1, 2)])
    seen = {t.edges for t in sample_trees_containing(f, 2000, 1)}
    assert seen == {t.edges for t in enumerate_trees(4, f)}


def test_sampler_uniform_chi_squared():
    scipy_stats = pytest.importorskip("scipy.stats")
    f = Forest.of(5, [(2, 4), (3, 5)])
    support = [t.edges for t in enumerate_trees(5, f)]
    counts = Counter(t.edges for t in sample_trees_containing(f, 30000, 4))
    assert set(counts) == set(support)
    obs = [counts[s] for s in support]
    assert scipy_stats.chisquare(obs).pvalue > 0.001
