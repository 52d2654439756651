from __future__ import annotations

import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from treespread.errors import InvalidInput, ResourceLimit, UndefinedRatio
from treespread.family import (
    EdgeUniverse,
    SetFamily,
    binom_upper_bound,
    concentration,
    is_t_intersecting,
    quotient,
    restrict,
    restrict_over_family,
    spanning_tree_family,
    spread_lemma_empirical,
    spreadness_check,
    subset_counts,
    t_intersecting_violation,
)
from treespread.trees import all_forests, star

from oracles import bitset_t_intersecting, brute_restrict, brute_spread


@pytest.fixture(scope="module")
def t4():
    return spanning_tree_family(4)


@pytest.fixture(scope="module")
def t5():
    return spanning_tree_family(5)


def families(n_max_universe=10, max_members=12):
    @st.composite
    def build(draw):
        n = draw(st.integers(3, 5))
        N = n * (n - 1) // 2
        members = draw(
            st.lists(st.frozensets(st.integers(1, N), max_size=4), min_size=1, max_size=max_members, unique=True)
        )
        return SetFamily.of(n, members)

    return build()


# ----------------------------------------------------------- universe / family

def test_universe_rank_roundtrip():
    u = EdgeUniverse(6)
    assert u.N == 15
    assert [u.rank(u.unrank(r)) for r in range(1, 16)] == list(range(1, 16))


def test_family_validation():
    with pytest.raises(InvalidInput):
        SetFamily(EdgeUniverse(4), (frozenset({1}), frozenset({1})))
    with pytest.raises(InvalidInput):
        SetFamily(EdgeUniverse(4), (frozenset({7}),))
    assert len(SetFamily.of(4, [{1}, {1}])) == 1


def test_members_sorted_canonically():
    a = SetFamily.of(4, [{3, 4}, {1, 2}, {1}])
    assert list(a.members) == sorted(a.members, key=lambda m: tuple(sorted(m)))


# ----------------------------------------------------------- restrict / quotient

def test_restrict_examples(t4):
    assert set(restrict(t4, [])) == set(t4)
    assert len(restrict(t4, [(1, 2)])) == 8
    assert len(restrict(t4, [(1, 2), (1, 3), (1, 4), (2, 3)])) == 0


def test_quotient_examples(t4):
    assert set(quotient(t4, [])) == set(t4)
    a = SetFamily.of(4, [{1, 2}, {1, 3}])
    assert set(quotient(a, {1})) == {frozenset({2}), frozenset({3})}
    q = quotient(t4, [(1, 2)])
    assert len(q) == 8 and all(len(m) == 2 for m in q)


def test_restrict_over_family_examples(t4):
    assert set(restrict_over_family(t4, SetFamily.of(4, [set()]))) == set(t4)
    s = SetFamily.of(4, [{t4.universe.rank((1, 2))}, {t4.universe.rank((3, 4))}])
    assert len(restrict_over_family(t4, s)) == 12
    assert len(restrict_over_family(t4, SetFamily.of(4, []))) == 0


@settings(max_examples=100, deadline=None)
@given(families(), st.data())
def test_restriction_laws(a, data):
    N = a.universe.N
    x = data.draw(st.frozensets(st.integers(1, N), max_size=3))
    y = data.draw(st.frozensets(st.integers(1, N), max_size=3))
    assert set(restrict(a, x)) == brute_restrict(a.members, x)
    assert len(restrict(a, x)) == len(quotient(a, x))
    assert set(restrict(restrict(a, x), y)) == set(restrict(a, x | y))


# ----------------------------------------------------------- concentration

def test_concentration_examples(t4):
    c0 = concentration(t4, 0)
    assert (c0.c, c0.d) == (16, 1)
    c1 = concentration(t4, 1)
    assert (c1.c, c1.d) == (8, Fraction(1, 2))
    assert concentration(t4, 3).c == 1
    assert concentration(t4, 4) == (0, 0, None)
    with pytest.raises(UndefinedRatio):
        concentration(SetFamily.of(4, []), 1)


@settings(max_examples=80, deadline=None)
@given(families())
def test_concentration_brute_and_monotone(a):
    N = a.universe.N
    prev = None
    for i in range(0, 5):
        best = max(
            (len(brute_restrict(a.members, s)) for s in itertools.combinations(range(1, N + 1), i)),
            default=0,
        )
        c = concentration(a, i).c
        assert c == best
        if prev is not None:
            assert c <= prev
        prev = c


# ----------------------------------------------------------- spreadness

def test_spread_examples(t4, t5):
    rep = spreadness_check(t5, Fraction(5, 2), 4)
    assert rep.holds and rep.exhaustive
    single = SetFamily.of(4, [{1, 2}])
    rep = spreadness_check(single, 2)
    assert not rep.holds and len(rep.worst_set) >= 1
    assert spreadness_check(t4, 2).holds


def test_t4_r2_against_all_forests(t4):
    for f in all_forests(4):
        s = t4.universe.ranks(f.edges)
        assert len(restrict(t4, s)) * 2 ** len(s) <= 16


@settings(max_examples=80, deadline=None)
@given(families(), st.sampled_from([Fraction(1), Fraction(3, 2), Fraction(2), Fraction(5, 2)]))
def test_spread_matches_power_set_oracle(a, r):
    assert spreadness_check(a, r).holds == brute_spread(a.members, r, a.universe.N)


def test_spread_t_mode_covers_quotients(t5):
    rep = spreadness_check(t5, Fraction(5, 2), 2)
    for j in range(3):
        for base in itertools.combinations(range(1, 11), j):
            q = quotient(t5, frozenset(base))
            if len(q):
                assert brute_spread(q.members, Fraction(5, 2), 10)
    assert rep.holds


def test_spread_drop_off_observation(t5):
    r = Fraction(5, 2)
    assert spreadness_check(t5, r, 4).holds
    d = [concentration(t5, i).d for i in range(5)]
    for j in range(0, 5):
        for i in range(j + 1, 5):
            assert d[i] <= r ** -(i - j) * d[j]


def test_spread_cap_partial_report(t5):
    with pytest.raises(ResourceLimit) as info:
        spreadness_check(t5, 2, cap=200)
    partial = info.value.partial
    assert partial is not None and not partial.exhaustive
    rep = spreadness_check(t5, 2, cap=200, allow_partial=True)
    assert rep.max_size < 4


def test_subset_counts_empty_set(t4):
    assert subset_counts(t4, 0)[frozenset()] == 16


# ----------------------------------------------------------- intersecting

def test_intersecting_examples():
    n = 5
    trivial = spanning_tree_family(n, [(1, 2), (3, 4)])
    assert is_t_intersecting(trivial, 2)
    a = SetFamily.from_forests(4, [[(1, 2), (2, 3), (3, 4)], [(1, 3), (1, 4), (2, 4)]])
    bad = t_intersecting_violation(a, 1)
    assert bad is not None and not (bad[0] & bad[1])


@settings(max_examples=100, deadline=None)
@given(families(), st.integers(0, 3))
def test_intersecting_matches_bitset_oracle(a, t):
    assert is_t_intersecting(a, t) == bitset_t_intersecting(a.members, t)


def test_all_stars_one_intersecting():
    a = SetFamily.from_forests(5, [star(5, c) for c in range(1, 6)])
    assert is_t_intersecting(a, 1)
    assert all(len(x & y) == 1 for x, y in itertools.combinations(a.members, 2))


# ----------------------------------------------------------- binomial bound

def test_binom_examples():
    assert binom_upper_bound(7, 0) == (1, 1)
    exact, bound = binom_upper_bound(4, 2)
    assert exact == 6
    assert abs(float(bound) - (2 * math.e) ** 2) < 1e-9
    assert bound < (2 * Fraction(272, 100)) ** 2


def test_binom_sweep():
    for n in range(0, 41):
        for k in range(0, n + 1):
            exact, bound = binom_upper_bound(n, k)
            assert exact <= bound
    with pytest.raises(InvalidInput):
        binom_upper_bound(3, 4)


# ----------------------------------------------------------- spread lemma

def test_spread_lemma_empty_member():
    a = SetFamily.of(4, [set(), {1, 2}])
    res = spread_lemma_empirical(a, 2, 2, 1, Fraction(1, 3), 200, seed=1)
    assert res.empirical == 1


def test_spread_lemma_vacuous_and_reported(t5):
    res = spread_lemma_empirical(t5, 4, Fraction(5, 2), 4, Fraction(1, 5), 10_000, seed=2024)
    assert res.paper_bound == 0.0 and res.consistent
    assert 0 <= res.empirical <= 1
    again = spread_lemma_empirical(t5, 4, Fraction(5, 2), 4, Fraction(1, 5), 10_000, seed=2024)
    assert again.empirical == res.empirical


def test_spread_lemma_rejects_bad_probability(t4):
    with pytest.raises(InvalidInput):
        spread_lemma_empirical(t4, 3, 2, 3, Fraction(1, 2), 10, seed=0)
