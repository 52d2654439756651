"""Set families over the edge universe of K_n.

Members are frozensets of edge ranks (1..C(n,2)).  Families are immutable
and keep their members in a canonical order (lexicographic on the sorted
rank tuple), so two families with the same members compare equal.

Every maximisation over restriction sets S only looks at subsets of
members: if S is contained in no member then A[S] is empty, so nothing is
lost and the searches stay finite.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple

from ._exact import as_fraction, e_bounds
from .errors import InvalidInput, InvariantViolation, ResourceLimit, UndefinedRatio
from .trees import Edge, Forest, edge_from_rank, enumerate_trees, parse_edge

DEFAULT_SUBSET_CAP = 2 ** 20


@dataclass(frozen=True)
class EdgeUniverse:
    n: int

    @property
    def N(self) -> int:
        return self.n * (self.n - 1) // 2

    def rank(self, edge) -> int:
        e = parse_edge(edge) if isinstance(edge, str) else Edge.of(*edge)
        if e.v > self.n:
            raise InvalidInput(f"edge {e} outside K_{self.n}")
        return e.rank(self.n)

    def unrank(self, r: int) -> Edge:
        return edge_from_rank(r, self.n)

    def ranks(self, edges: Iterable) -> frozenset[int]:
        return frozenset(self.rank(e) for e in edges)

    def edges(self, ranks: Iterable[int]) -> list[Edge]:
        return sorted(self.unrank(r) for r in ranks)


def _key(member: frozenset[int]) -> tuple[int, ...]:
    return tuple(sorted(member))


@dataclass(frozen=True)
class SetFamily:
    universe: EdgeUniverse
    members: tuple[frozenset[int], ...]
    _index: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        members = tuple(frozenset(m) for m in self.members)
        N = self.universe.N
        for m in members:
            for r in m:
                if not (isinstance(r, int) and 1 <= r <= N):
                    raise InvalidInput(f"rank {r!r} outside 1..{N}")
        index = frozenset(members)
        if len(index) != len(members):
            raise InvalidInput("family members must be pairwise distinct")
        object.__setattr__(self, "members", tuple(sorted(members, key=_key)))
        object.__setattr__(self, "_index", index)

    @classmethod
    def of(cls, universe: EdgeUniverse | int, sets: Iterable[Iterable[int]]) -> "SetFamily":
        """Build a family from rank sets, dropping duplicates."""
        if isinstance(universe, int):
            universe = EdgeUniverse(universe)
        return cls(universe, tuple({frozenset(s) for s in sets}))

    @classmethod
    def from_forests(cls, n: int, forests: Iterable[Forest | Iterable]) -> "SetFamily":
        u = EdgeUniverse(n)
        sets = []
        for f in forests:
            edges = f.edges if isinstance(f, Forest) else f
            sets.append(u.ranks(edges))
        return cls.of(u, sets)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[frozenset[int]]:
        return iter(self.members)

    def __contains__(self, member) -> bool:
        return frozenset(member) in self._index

    @property
    def n(self) -> int:
        return self.universe.n

    def issubfamily(self, other: "SetFamily") -> bool:
        return self._index <= other._index

    def max_member_size(self) -> int:
        return max((len(m) for m in self.members), default=0)

    def edge_sets(self) -> list[list[Edge]]:
        return [self.universe.edges(m) for m in self.members]

    def minus(self, other: "SetFamily | Iterable[frozenset[int]]") -> "SetFamily":
        drop = other._index if isinstance(other, SetFamily) else frozenset(map(frozenset, other))
        return SetFamily(self.universe, tuple(m for m in self.members if m not in drop))

    def with_members(self, members: Iterable[frozenset[int]]) -> "SetFamily":
        return SetFamily(self.universe, tuple(members))


def spanning_tree_family(n: int, contains: Forest | Iterable = ()) -> SetFamily:
    """The family of all spanning trees of K_n (containing ``contains``)."""
    return SetFamily.from_forests(n, enumerate_trees(n, contains))


def _as_rank_set(a: SetFamily, x) -> frozenset[int]:
    if isinstance(x, Forest):
        return a.universe.ranks(x.edges)
    x = list(x)
    if x and not isinstance(x[0], int):
        return a.universe.ranks(x)
    s = frozenset(x)
    for r in s:
        if not 1 <= r <= a.universe.N:
            raise InvalidInput(f"rank {r} outside 1..{a.universe.N}")
    return s


# ------------------------------------------------------------------ operations

def restrict(a: SetFamily, x) -> SetFamily:
    """Members containing ``x``."""
    x = _as_rank_set(a, x)
    return SetFamily(a.universe, tuple(m for m in a.members if x <= m))


def quotient(a: SetFamily, x) -> SetFamily:
    """Members containing ``x``, with ``x`` removed from each."""
    x = _as_rank_set(a, x)
    return SetFamily(a.universe, tuple(m - x for m in a.members if x <= m))


def restrict_over_family(a: SetFamily, s: SetFamily) -> SetFamily:
    """Members containing at least one member of ``s``."""
    if a.universe != s.universe:
        raise InvalidInput("families live on different universes")
    keep = [m for m in a.members if any(y <= m for y in s.members)]
    return SetFamily(a.universe, tuple(keep))


def subset_counts(a: SetFamily, max_size: int | None = None) -> Counter:
    """|a[S]| for every S that is a subset of some member (|S| <= max_size)."""
    counts: Counter = Counter()
    for m in a.members:
        elems = sorted(m)
        top = len(elems) if max_size is None else min(max_size, len(elems))
        for k in range(top + 1):
            for combo in itertools.combinations(elems, k):
                counts[frozenset(combo)] += 1
    return counts


def _subset_work(a: SetFamily, max_size: int | None) -> int:
    total = 0
    for m in a.members:
        top = len(m) if max_size is None else min(max_size, len(m))
        total += sum(math.comb(len(m), k) for k in range(top + 1))
    return total


class Concentration(NamedTuple):
    c: int
    d: Fraction
    argmax: frozenset[int] | None


def concentration(a: SetFamily, i: int) -> Concentration:
    """c_i = max |a[S]| over i-sets S, d_i = c_i / |a|.

    The argmax is the lexicographically smallest maximiser; for i larger
    than every member no i-set is covered and c_i = 0.
    """
    if not len(a):
        raise UndefinedRatio("concentration of an empty family is undefined")
    if i < 0:
        raise InvalidInput("i must be non-negative")
    counts: Counter = Counter()
    for m in a.members:
        for combo in itertools.combinations(sorted(m), i):
            counts[combo] += 1
    if not counts:
        return Concentration(0, Fraction(0), None)
    best = max(counts.values())
    arg = min(k for k, v in counts.items() if v == best)
    return Concentration(best, Fraction(best, len(a)), frozenset(arg))


@dataclass(frozen=True)
class SpreadReport:
    """Outcome of an r-spread or (r, t)-spread check.

    ``worst_ratio`` is max |A(T)[S]| r^|S| / |A(T)| over the tested pairs;
    ``worst_base`` is T (``None`` in plain r-spread mode).
    """

    r: Fraction
    t: int | None
    holds: bool
    worst_set: frozenset[int]
    worst_ratio: Fraction
    worst_base: frozenset[int] | None = None
    exhaustive: bool = True
    max_size: int | None = None
    checked: int = 0


def _better(num, den, size, key, best) -> bool:
    if best is None:
        return True
    bnum, bden, bsize, bkey = best
    lhs, rhs = num * bden, bnum * den
    if lhs != rhs:
        return lhs > rhs
    return (size, key) < (bsize, bkey)


def spreadness_check(
    a: SetFamily,
    r,
    t: int | None = None,
    max_size: int | None = None,
    cap: int = DEFAULT_SUBSET_CAP,
    allow_partial: bool = False,
) -> SpreadReport:
    """Check |A[S]| <= r^-|S| |A| exactly over every S covered by a member.

    With ``t`` the check runs on every quotient A(T) with |T| <= t (T = ∅
    included), which is what makes the drop-off d_i <= r^-(i-j) d_j hold
    for every j <= t.  Quotients by uncovered T are empty and pass
    vacuously.

    If enumerating all subsets of members would exceed ``cap``, the size
    limit is lowered until it fits; the resulting report is marked
    non-exhaustive and, unless ``allow_partial``, raised inside a
    ``ResourceLimit``.
    """
    if not len(a):
        raise UndefinedRatio("spreadness of an empty family is undefined")
    r = as_fraction(r)
    if r <= 0:
        raise InvalidInput("r must be positive")
    exhaustive = True
    top = a.max_member_size() if max_size is None else min(max_size, a.max_member_size())
    if max_size is not None and max_size < a.max_member_size():
        exhaustive = False
    while top > 0 and _subset_work(a, top) > cap:
        top -= 1
        exhaustive = False
    counts = subset_counts(a, top)
    p, q = r.numerator, r.denominator
    ppow = [p ** k for k in range(top + 1)]
    qpow = [q ** k for k in range(top + 1)]
    best = None
    checked = 0
    total = len(a)
    if t is None:
        for s, cnt in counts.items():
            k = len(s)
            checked += 1
            num, den = cnt * ppow[k], total * qpow[k]
            key = tuple(sorted(s))
            if _better(num, den, k, key, best):
                best = (num, den, k, key)
                worst = (s, None)
    else:
        if t < 0:
            raise InvalidInput("t must be non-negative")
        for x, cnt in counts.items():
            elems = sorted(x)
            for j in range(min(t, len(elems)) + 1):
                for base in itertools.combinations(elems, j):
                    base = frozenset(base)
                    s = x - base
                    k = len(s)
                    checked += 1
                    num, den = cnt * ppow[k], counts[base] * qpow[k]
                    key = (tuple(sorted(s)), tuple(sorted(base)))
                    if _better(num, den, k, key, best):
                        best = (num, den, k, key)
                        worst = (s, base)
    ratio = Fraction(best[0], best[1])
    report = SpreadReport(
        r=r,
        t=t,
        holds=ratio <= 1,
        worst_set=worst[0],
        worst_ratio=ratio,
        worst_base=worst[1],
        exhaustive=exhaustive,
        max_size=top,
        checked=checked,
    )
    if not exhaustive and not allow_partial:
        raise ResourceLimit(
            f"spreadness check limited to |S| <= {top} by cap {cap}", partial=report
        )
    return report


def t_intersecting_violation(a: SetFamily, t: int) -> tuple[frozenset[int], frozenset[int]] | None:
    """First member pair (in canonical order) sharing fewer than t elements."""
    members = a.members
    for i in range(len(members)):
        mi = members[i]
        for j in range(i + 1, len(members)):
            if len(mi & members[j]) < t:
                return mi, members[j]
    return None


def is_t_intersecting(a: SetFamily, t: int) -> bool:
    return t_intersecting_violation(a, t) is None


class BinomBound(NamedTuple):
    exact: int
    bound: Fraction


def binom_upper_bound(n: int, k: int) -> BinomBound:
    """C(n, k) together with a rational lower estimate of (e n / k)^k.

    The bound is computed with a rational value strictly below e, so
    ``exact <= bound`` certifies the real inequality.
    """
    if not 0 <= k <= n:
        raise InvalidInput("need 0 <= k <= n")
    exact = math.comb(n, k)
    if k == 0:
        return BinomBound(exact, Fraction(1))
    e_lo, _ = e_bounds()
    return BinomBound(exact, (e_lo * n / k) ** k)


@dataclass(frozen=True)
class SpreadLemmaReport:
    empirical: Fraction
    paper_bound: float
    sigma: float
    spread: bool | None
    consistent: bool
    trials: int


def spread_lemma_empirical(
    a: SetFamily,
    k: int,
    r,
    beta,
    delta,
    trials: int,
    seed,
    check_spread: bool = True,
) -> SpreadLemmaReport:
    """Monte Carlo estimate of P(some member ⊆ W) for a (beta*delta)-random W.

    Compared against max(0, 1 - k (2 / log2(r delta))^beta).  When the
    family is verified r-spread the estimate must not fall more than three
    standard errors below that bound.
    """
    r, beta, delta = as_fraction(r), as_fraction(beta), as_fraction(delta)
    p = beta * delta
    if not 0 <= p <= 1:
        raise InvalidInput(f"inclusion probability beta*delta = {p} is not in [0, 1]")
    if any(len(m) > k for m in a.members):
        raise InvalidInput(f"family has members larger than k = {k}")
    rd = float(r * delta)
    if rd > 1:
        bound = max(0.0, 1.0 - k * (2.0 / math.log2(rd)) ** float(beta))
    else:
        bound = 0.0
    rng = random.Random(seed)
    N = a.universe.N
    pf = float(p)
    members = a.members
    hits = 0
    for _ in range(trials):
        w = {x for x in range(1, N + 1) if rng.random() < pf}
        if any(m <= w for m in members):
            hits += 1
    empirical = Fraction(hits, trials)
    sigma = math.sqrt(bound * (1 - bound) / trials)
    consistent = float(empirical) >= bound - 3 * sigma
    spread = None
    if check_spread and len(a):
        rep = spreadness_check(a, r, allow_partial=True)
        spread = rep.holds if rep.exhaustive else None
    if spread and not consistent:
        raise InvariantViolation(
            f"empirical hit rate {float(empirical):.4f} below spread-lemma bound {bound:.4f}"
        )
    return SpreadLemmaReport(empirical, bound, sigma, spread, consistent, trials)
