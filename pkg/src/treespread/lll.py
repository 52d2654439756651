"""Events "T contains H" for a uniform tree T among those containing a base
forest, their dependency structure, and Lopsided Local Lemma certificates.

The dependency graph joins two events whose forests are *not* F-disjoint
(they touch a common component of the base forest).  Conditioning on the
complements of an event's non-neighbours then leaves its probability
unchanged, which is the property the local lemma consumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Sequence

from ._exact import as_fraction
from .errors import (
    InvalidInput,
    InvariantViolation,
    PreconditionViolation,
    UndefinedRatio,
)
from .trees import (
    DEFAULT_ENUMERATION_CAP,
    Forest,
    count_containing,
    count_containing_avoiding,
    enumerate_trees,
    is_star_like,
    sample_trees_containing,
)

STAR_LIKE_CONSTANT = 12


def _forest(n: int, h) -> Forest:
    if isinstance(h, Forest):
        if h.n != n:
            raise InvalidInput("event forest lives on a different vertex set")
        return h
    return Forest.of(n, h)


@dataclass(frozen=True)
class EventSystem:
    n: int
    base: Forest
    events: tuple[Forest, ...]

    def __post_init__(self):
        base = _forest(self.n, self.base)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "events", tuple(_forest(self.n, h) for h in self.events))

    @classmethod
    def of(cls, n: int, base: Iterable = (), events: Iterable[Iterable] = ()) -> "EventSystem":
        return cls(n, Forest.of(n, base) if not isinstance(base, Forest) else base, tuple(events))

    def __len__(self) -> int:
        return len(self.events)

    @cached_property
    def _base_count(self) -> int:
        return count_containing(self.base)

    def base_count(self) -> int:
        return self._base_count


def _joint_count(base: Forest, forests: Iterable[Forest]) -> int:
    g = base
    for h in forests:
        g = g.union(h)
        if g is None:
            return 0
    return count_containing(g)


def event_probability(sys: EventSystem, i: int) -> Fraction:
    """P(T ⊇ H_i) = |T_n[base ∪ H_i]| / |T_n[base]|, 0 if that union has a cycle."""
    return Fraction(_joint_count(sys.base, [sys.events[i]]), sys.base_count())


def joint_probability(sys: EventSystem, indices: Iterable[int]) -> Fraction:
    return Fraction(_joint_count(sys.base, [sys.events[j] for j in indices]), sys.base_count())


def are_f_disjoint(base: Forest, h1: Forest, h2: Forest) -> bool:
    """No base component holds both a vertex of ``h1`` and a vertex of ``h2``."""
    rep = base.component_map()
    c1 = {rep[v] for v in h1.vertices()}
    return not any(rep[v] in c1 for v in h2.vertices())


@dataclass(frozen=True)
class DependencyGraph:
    size: int
    adjacency: tuple[frozenset[int], ...]

    def neighbors(self, i: int) -> frozenset[int]:
        return self.adjacency[i]

    def non_neighbors(self, i: int) -> frozenset[int]:
        return frozenset(range(self.size)) - self.adjacency[i] - {i}

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.size) for j in sorted(self.adjacency[i]) if i < j]

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)


def build_dependency_graph(sys: EventSystem) -> DependencyGraph:
    k = len(sys.events)
    adj = [set() for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            if not are_f_disjoint(sys.base, sys.events[i], sys.events[j]):
                adj[i].add(j)
                adj[j].add(i)
    return DependencyGraph(k, tuple(frozenset(a) for a in adj))


@dataclass(frozen=True)
class IndependenceCheck:
    lhs: Fraction
    rhs: Fraction
    equal: bool


def verify_independence(sys: EventSystem, i: int, j: int) -> IndependenceCheck:
    """P(A_i ∧ A_j) = P(A_i) P(A_j) for F-disjoint H_i, H_j (hard-asserted)."""
    hi, hj = sys.events[i], sys.events[j]
    if not are_f_disjoint(sys.base, hi, hj):
        raise PreconditionViolation(f"events {i} and {j} are not F-disjoint")
    lhs = joint_probability(sys, [i, j])
    rhs = event_probability(sys, i) * event_probability(sys, j)
    if lhs != rhs:
        raise InvariantViolation(f"independence fails for events {i}, {j}: {lhs} != {rhs}")
    return IndependenceCheck(lhs, rhs, True)


@dataclass(frozen=True)
class NegativeDependencyCheck:
    conditional: Fraction | float
    unconditional: Fraction
    ok: bool
    method: str
    sigma: float | None = None
    samples: int | None = None


def _contains(tree_edges: frozenset, h: Forest) -> bool:
    return h.edges <= tree_edges


def verify_negative_dependency(
    sys: EventSystem,
    i: int,
    cond_set: Iterable[int],
    method: str = "exact",
    samples: int = 100_000,
    seed=None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> NegativeDependencyCheck:
    """Compare P(A_i | no A_j for j in cond_set) with P(A_i).

    ``cond_set`` must consist of non-neighbours of i, i.e. events F-disjoint
    from H_i.  The exact method enumerates every tree containing the base
    and asserts equality; the Monte Carlo method draws ``samples`` uniform
    trees with ``seed`` and reports the estimate with its standard error.
    """
    cond = sorted(set(cond_set))
    graph = build_dependency_graph(sys)
    bad = [j for j in cond if j == i or j in graph.neighbors(i)]
    if bad:
        raise PreconditionViolation(f"conditioning events {bad} are not F-disjoint from event {i}")
    hi = sys.events[i]
    hs = [sys.events[j] for j in cond]
    unconditional = event_probability(sys, i)

    if method == "exact":
        both = none = 0
        for tree in enumerate_trees(sys.n, sys.base, cap=cap):
            e = tree.edges
            if not any(_contains(e, h) for h in hs):
                none += 1
                if _contains(e, hi):
                    both += 1
        if none == 0:
            raise UndefinedRatio("the conditioning event has probability 0")
        conditional = Fraction(both, none)
        if conditional != unconditional:
            raise InvariantViolation(
                f"P(A_{i} | ...) = {conditional} differs from P(A_{i}) = {unconditional}"
            )
        return NegativeDependencyCheck(conditional, unconditional, True, "exact")

    if method != "monte_carlo":
        raise InvalidInput(f"unknown method {method!r}")
    if seed is None:
        raise InvalidInput("Monte Carlo mode needs an explicit seed")
    both = none = 0
    for tree in sample_trees_containing(sys.base, samples, seed):
        e = tree.edges
        if not any(_contains(e, h) for h in hs):
            none += 1
            if _contains(e, hi):
                both += 1
    if none == 0:
        raise UndefinedRatio("no sample satisfied the conditioning event")
    est = both / none
    p = float(unconditional)
    sigma = math.sqrt(p * (1 - p) / none)
    return NegativeDependencyCheck(
        est, unconditional, est <= p + 3 * sigma, "monte_carlo", sigma, none
    )


def none_probability(sys: EventSystem, method: str = "enumerate", cap: int = DEFAULT_ENUMERATION_CAP) -> Fraction:
    """P(no event occurs), by tree enumeration or inclusion–exclusion."""
    total = sys.base_count()
    if method == "enumerate":
        hs = [h for h in sys.events]
        good = sum(
            1
            for tree in enumerate_trees(sys.n, sys.base, cap=cap)
            if not any(_contains(tree.edges, h) for h in hs)
        )
        return Fraction(good, total)
    if method != "inclusion-exclusion":
        raise InvalidInput(f"unknown method {method!r}")
    k = len(sys.events)
    acc = 0
    for mask in range(1 << k):
        chosen = [sys.events[j] for j in range(k) if mask >> j & 1]
        acc += (-1) ** len(chosen) * _joint_count(sys.base, chosen)
    return Fraction(acc, total)


@dataclass(frozen=True)
class LLLCertificate:
    x: tuple[Fraction, ...]
    condition_ok: tuple[bool, ...]
    bound: Fraction
    probabilities: tuple[Fraction, ...]
    graph: DependencyGraph
    exact_none: Fraction | None = None

    @property
    def all_ok(self) -> bool:
        return all(self.condition_ok)


def lll_bound(
    sys: EventSystem,
    x: Sequence,
    exact_check: bool = True,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> LLLCertificate:
    """Check P(A_i) <= x_i prod_{j ~ i} (1 - x_j) and return prod (1 - x_j).

    When every condition holds and ``exact_check`` is set (and n is within
    the enumeration cap), the exact probability that no event occurs is
    computed and must be at least the bound.
    """
    xs = tuple(as_fraction(v) for v in x)
    if len(xs) != len(sys.events):
        raise InvalidInput(f"expected {len(sys.events)} x-values, got {len(xs)}")
    if any(not 0 < v < 1 for v in xs):
        raise InvalidInput("every x_i must lie strictly between 0 and 1")
    graph = build_dependency_graph(sys)
    probs = tuple(event_probability(sys, i) for i in range(len(xs)))
    ok = []
    for i, p in enumerate(probs):
        rhs = xs[i]
        for j in graph.neighbors(i):
            rhs *= 1 - xs[j]
        ok.append(p <= rhs)
    bound = math.prod((1 - v for v in xs), start=Fraction(1))
    exact = None
    if all(ok) and exact_check and sys.n <= cap:
        exact = none_probability(sys, "enumerate", cap=cap)
        if exact < bound:
            raise InvariantViolation(f"P(no event) = {exact} is below the certified {bound}")
    return LLLCertificate(xs, tuple(ok), bound, probs, graph, exact)


@dataclass(frozen=True)
class AvoidingBound:
    exact_fraction: Fraction
    lll_bound: Fraction | None
    star_like: bool
    events: int
    count: int
    base_count: int
    quotient_count: int

    @property
    def meets_lll(self) -> bool | None:
        return None if self.lll_bound is None else self.exact_fraction >= self.lll_bound

    @property
    def meets_hundredth(self) -> bool:
        return self.exact_fraction >= Fraction(1, 100)


def avoiding_fraction_bound(base: Forest, t0: Forest) -> AvoidingBound:
    """Fraction of trees containing ``base`` that share no edge with t0 \\ base.

    The count is exact (inclusion–exclusion).  If t0 is not 12-star-like and
    the local-lemma conditions hold with every x = 4/n, the certified lower
    bound (1 - 4/n)^m is attached, m = |t0 \\ base|, and the exact fraction
    must dominate it.
    """
    if base.n != t0.n:
        raise InvalidInput("forests live on different vertex sets")
    n = base.n
    avoid = sorted(t0.edges - base.edges)
    total = count_containing(base)
    good = count_containing_avoiding(base, avoid)
    fraction = Fraction(good, total)
    star_like = is_star_like(t0, STAR_LIKE_CONSTANT)
    bound = None
    if not star_like and n > 4:
        if not avoid:
            bound = Fraction(1)
        else:
            sys = EventSystem(n, base, tuple(Forest.of(n, [e]) for e in avoid))
            x = Fraction(4, n)
            cert = lll_bound(sys, [x] * len(avoid), exact_check=False)
            if cert.all_ok:
                bound = cert.bound
    if bound is not None and fraction < bound:
        raise InvariantViolation(f"avoiding fraction {fraction} below local-lemma bound {bound}")
    # the quotient T_n(F) has as many members as T_n[F]
    return AvoidingBound(fraction, bound, star_like, len(avoid), good, total, total)


def degree_condition_holds(n: int) -> bool:
    """(1 - 4/n)^(n/6) >= 1/2, decided exactly as 64 (n-4)^n >= n^n."""
    if n <= 4:
        return False
    return 64 * (n - 4) ** n >= n ** n
