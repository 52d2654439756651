"""Invariant battery behind the ``selftest`` verb.

Each check returns True or raises; ``run_selftest`` collects the outcome
per check so a single mismatch does not hide the others.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from . import extremal, family, lll, spread, trees


def _counting(max_n: int) -> bool:
    for n in range(1, max_n + 1):
        for f in trees.all_forests(n, max_edges=min(n - 1, 3)):
            c = trees.count_containing(f)
            if c != trees.matrix_tree_count(n, f):
                return False
            if n <= 5 and c != sum(1 for _ in trees.enumerate_trees(n, f)):
                return False
    return True


def _cayley(max_n: int) -> bool:
    return all(
        sum(1 for _ in trees.enumerate_trees(n)) == n ** (n - 2) for n in range(2, min(max_n, 7) + 1)
    )


def _prufer(max_n: int) -> bool:
    n = min(max_n, 6)
    for seq in itertools.product(range(1, n + 1), repeat=n - 2):
        if tuple(trees.prufer_encode(trees.prufer_decode(list(seq), n))) != seq:
            return False
    return True


def _avoiding(max_n: int) -> bool:
    rng = random.Random(7)
    n = min(max_n, 6)
    for _ in range(30):
        pool = [trees.Edge.of(*e) for e in itertools.combinations(range(1, n + 1), 2)]
        picked = rng.sample(pool, 4)
        f = trees.Forest.of(n, picked[:1])
        avoid = picked[1:]
        brute = sum(1 for _ in trees.enumerate_trees(n, f, avoid))
        if trees.count_containing_avoiding(f, avoid) != brute:
            return False
    return True


def _classification(max_n: int) -> bool:
    n = min(max_n, 6)
    for t in range(0, n // 2 + 1):
        for es in itertools.combinations(itertools.combinations(range(1, n + 1), 2), t):
            if trees.is_acyclic(n, es):
                extremal.restriction_size_classification(trees.Forest.of(n, es), t)
    return True


def _spread(max_n: int) -> bool:
    return all(
        family.spreadness_check(family.spanning_tree_family(n), Fraction(n, 2), n - 1).holds
        for n in range(4, min(max_n, 6) + 1)
    )


def _spread_restriction(max_n: int) -> bool:
    n = min(max_n, 5)
    u = family.spanning_tree_family(n)
    rng = random.Random(11)
    for _ in range(10):
        a = u.with_members(rng.sample(list(u.members), rng.randint(1, len(u))))
        res = spread.find_spread_restriction(a, u, Fraction(n, 2), Fraction(5, 4))
        if not (res.quotient_report.holds and res.size_bound_holds):
            return False
    return True


def _edge_probability(max_n: int) -> bool:
    n = min(max_n, 6)
    for f in trees.all_forests(n, max_edges=2):
        sys_ = lll.EventSystem(n, f, tuple(trees.Forest.of(n, [e]) for e in
                                           itertools.combinations(range(1, n + 1), 2)
                                           if trees.Edge.of(*e) not in f.edges))
        for i in range(len(sys_)):
            if lll.event_probability(sys_, i) > Fraction(2, n):
                return False
    return True


def _lll(max_n: int) -> bool:
    n = min(max_n, 6)
    base = trees.Forest.of(n, [(1, 2)])
    sys_ = lll.EventSystem.of(n, base, [[(3, 4)], [(5, 6)], [(1, 3)]])
    cert = lll.lll_bound(sys_, [Fraction(1, 2)] * 3)
    return cert.exact_none is None or cert.exact_none >= cert.bound


def _extremal(max_n: int) -> bool:
    return extremal.max_t_intersecting_exact(4, 2).exact_max == 4


CHECKS = (
    ("counting_oracles", _counting),
    ("cayley", _cayley),
    ("prufer_bijection", _prufer),
    ("inclusion_exclusion", _avoiding),
    ("restriction_classification", _classification),
    ("tree_family_spread", _spread),
    ("spread_restriction", _spread_restriction),
    ("edge_probability", _edge_probability),
    ("local_lemma", _lll),
    ("extremal_n4", _extremal),
)


def run_selftest(max_n: int = 6) -> list[tuple[str, bool]]:
    out = []
    for name, check in CHECKS:
        try:
            ok = bool(check(max_n))
        except AssertionError:
            ok = False
        out.append((name, ok))
    return out
