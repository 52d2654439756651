"""Tight constructions and exact extremal search for t-intersecting families
of spanning trees at small n."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .clique import max_clique
from .errors import InvalidInput, InvariantViolation, OutOfScope, ResourceLimit
from .family import EdgeUniverse, SetFamily, is_t_intersecting, spanning_tree_family
from .trees import Forest, count_containing, enumerate_trees, matching, star

DEFAULT_CLIQUE_CAP = 6
KINDS = ("disjoint-edges", "star-plus-edge", "all-stars", "custom")


@dataclass(frozen=True)
class ConstructionSpec:
    kind: str
    n: int
    t: int | None = None
    forest: Forest | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInput(f"unknown construction {self.kind!r}; choose from {KINDS}")
        if self.kind == "disjoint-edges":
            if self.t is None or self.t < 0 or 2 * self.t > self.n:
                raise InvalidInput(f"disjoint-edges needs 0 <= 2t <= n, got t = {self.t}")
        if self.kind == "star-plus-edge" and self.n < 3:
            raise InvalidInput("star-plus-edge needs n >= 3")
        if self.kind == "custom":
            if self.forest is None or self.forest.n != self.n:
                raise InvalidInput("custom construction needs a forest on [n]")


def construct(spec: ConstructionSpec) -> SetFamily:
    n = spec.n
    if spec.kind == "disjoint-edges":
        return spanning_tree_family(n, matching(n, spec.t))
    if spec.kind == "custom":
        return spanning_tree_family(n, spec.forest)
    stars = [star(n, c) for c in range(1, n + 1)] if n >= 2 else []
    if spec.kind == "all-stars":
        return SetFamily.from_forests(n, stars)
    trees = list(enumerate_trees(n, Forest.of(n, [(1, 2)])))
    return SetFamily.from_forests(n, trees + stars)


@dataclass(frozen=True)
class Classification:
    size: int
    matching_case: bool
    bound: Fraction


def is_matching(f: Forest) -> bool:
    return max(f.degrees(), default=0) <= 1


def matching_bound(n: int, t: int) -> Fraction:
    """2^t n^(n-t-2)."""
    return Fraction(2) ** t * Fraction(n) ** (n - t - 2)


def restriction_size_classification(f: Forest, t: int | None = None) -> Classification:
    """|T_n[f]| against 2^t n^(n-t-2) (matchings: equality) or 3/4 of it."""
    t = len(f.edges) if t is None else t
    if len(f.edges) != t:
        raise InvalidInput(f"forest has {len(f.edges)} edges, not t = {t}")
    if 2 * t > f.n:
        raise OutOfScope(f"t = {t} exceeds n/2 = {Fraction(f.n, 2)}")
    size = count_containing(f)
    full = matching_bound(f.n, t)
    if is_matching(f):
        if size != full:
            raise InvariantViolation(f"matching {f} gives {size}, expected {full}")
        return Classification(size, True, full)
    bound = Fraction(3, 4) * full
    if size > bound:
        raise InvariantViolation(f"non-matching {f} gives {size} > {bound}")
    return Classification(size, False, bound)


# ----------------------------------------------------------- extremal search

def _canonical(adj: dict[int, list[int]], root: int, parent: int) -> str:
    kids = sorted(_canonical(adj, c, root) for c in adj[root] if c != parent)
    return "(" + "".join(kids) + ")"


def tree_shape(tree: Forest) -> str:
    """Isomorphism invariant of a tree: AHU code rooted at its centre(s)."""
    n = tree.n
    adj: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
    for u, v in tree.edges:
        adj[u].append(v)
        adj[v].append(u)
    deg = {v: len(adj[v]) for v in adj}
    layer = [v for v in adj if deg[v] <= 1]
    remaining = n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for w in adj[v]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    return min(_canonical(adj, c, 0) for c in layer)


def best_trivial_forest(n: int, t: int) -> Forest | None:
    """A t-edge forest maximizing |T_n[F]| (product of component sizes).

    Components are vertex-disjoint paths; the size profile is found by
    searching partitions of t into parts (component size - 1).
    """
    if t > n - 1:
        return None
    best = None
    for parts in _partitions(t):
        if sum(p + 1 for p in parts) > n:
            continue
        value = math.prod(p + 1 for p in parts)
        if best is None or value > best[0]:
            best = (value, parts)
    if best is None:
        return None
    edges, nxt = [], 1
    for p in best[1]:
        verts = list(range(nxt, nxt + p + 1))
        edges += list(zip(verts, verts[1:]))
        nxt += p + 1
    return Forest.of(n, edges)


def _partitions(t: int, largest: int | None = None):
    if t == 0:
        yield ()
        return
    largest = t if largest is None else largest
    for first in range(min(t, largest), 0, -1):
        for rest in _partitions(t - first, first):
            yield (first, *rest)


def constructions_for(n: int, t: int) -> dict[str, SetFamily]:
    """Built-in t-intersecting constructions valid at (n, t)."""
    out: dict[str, SetFamily] = {}
    if 2 * t <= n:
        out["disjoint-edges"] = construct(ConstructionSpec("disjoint-edges", n, t))
    if t <= 1 and n >= 3:
        out["star-plus-edge"] = construct(ConstructionSpec("star-plus-edge", n))
    if t <= 1 and n >= 2:
        out["all-stars"] = construct(ConstructionSpec("all-stars", n))
    f = best_trivial_forest(n, t)
    if f is not None and f.edges:
        out["best-trivial"] = construct(ConstructionSpec("custom", n, t, f))
    if t == 0:
        out["all-trees"] = spanning_tree_family(n)
    return out


@dataclass(frozen=True)
class ExtremalReport:
    n: int
    t: int
    construction_size: int
    exact_max: int
    exact: bool
    witness_family: SetFamily
    paper_bound: Fraction
    constructions: dict[str, int] = field(default_factory=dict)
    nodes: int = 0

    @property
    def within_bound(self) -> bool:
        return self.exact_max <= self.paper_bound

    @property
    def construction_exceeds_bound(self) -> bool:
        return self.construction_size > self.paper_bound


def compatibility_graph(masks: list[int], t: int) -> list[int]:
    """Bitset adjacency joining members whose masks share >= t bits."""
    k = len(masks)
    adj = [0] * k
    for i in range(k):
        mi = masks[i]
        row = 0
        for j in range(k):
            if j != i and bin(mi & masks[j]).count("1") >= t:
                row |= 1 << j
        adj[i] = row
    return adj


def _induced(adj: list[int], verts: list[int]) -> list[int]:
    index = {v: i for i, v in enumerate(verts)}
    sub = []
    for v in verts:
        row, a = 0, adj[v]
        for w in verts:
            if a >> w & 1:
                row |= 1 << index[w]
        sub.append(row)
    return sub


def max_t_intersecting_exact(
    n: int,
    t: int,
    budget: int | None = None,
    cap: int = DEFAULT_CLIQUE_CAP,
) -> ExtremalReport:
    """Largest t-intersecting family of spanning trees of K_n, by exact search.

    Vertices of the compatibility graph are the n^(n-2) trees in Prüfer
    order.  The symmetric group acts on it, so the search is split by tree
    shape: for each shape in turn a maximum clique through one
    representative is sought among trees of shapes not yet handled.  The
    best construction seeds the incumbent.  If ``budget`` (search nodes)
    runs out the result is a lower bound and ``exact`` is False.
    """
    if n > cap:
        raise ResourceLimit(f"exact extremal search capped at n <= {cap}")
    if not 0 <= t <= max(n - 1, 0):
        raise InvalidInput(f"t must lie in [0, n-1], got {t}")
    trees = list(enumerate_trees(n))
    universe = EdgeUniverse(n)
    masks = [sum(1 << universe.rank(e) for e in tr.edges) for tr in trees]
    index = {m: i for i, m in enumerate(masks)}
    adj = compatibility_graph(masks, t)

    cons = constructions_for(n, t)
    sizes = {name: len(fam) for name, fam in cons.items()}
    seed_name = max(cons, key=lambda k: (len(cons[k]), k)) if cons else None
    best = []
    if seed_name is not None:
        best = sorted(index[sum(1 << r for r in m)] for m in cons[seed_name].members)
    if len(best) < 1:
        best = [0]

    shapes: dict[str, list[int]] = {}
    for i, tr in enumerate(trees):
        shapes.setdefault(tree_shape(tr), []).append(i)
    order = sorted(shapes, key=lambda s: (len(shapes[s]), s))

    exact = True
    nodes = 0
    done: set[int] = set()
    for shape in order:
        rep = shapes[shape][0]
        allowed = [v for v in range(len(trees)) if v not in done and adj[rep] >> v & 1]
        remaining = None if budget is None else budget - nodes
        if remaining is not None and remaining <= 0:
            exact = False
            break
        res = max_clique(_induced(adj, allowed), budget=remaining, floor=len(best) - 1)
        nodes += res.nodes
        if len(res.clique) + 1 > len(best):
            best = sorted([rep] + [allowed[i] for i in res.clique])
        if not res.exact:
            exact = False
            break
        done.update(shapes[shape])

    witness = SetFamily(universe, tuple(universe.ranks(trees[i].edges) for i in best))
    if not is_t_intersecting(witness, t):
        raise InvariantViolation("clique search returned a non-intersecting family")
    return ExtremalReport(
        n=n,
        t=t,
        construction_size=max(sizes.values(), default=0),
        exact_max=len(best),
        exact=exact,
        witness_family=witness,
        paper_bound=matching_bound(n, t),
        constructions=sizes,
        nodes=nodes,
    )


def verify_main_bound(n: int, t: int, budget: int | None = None) -> ExtremalReport:
    """Exact maximum vs 2^t n^(n-t-2) vs the constructions, reported only.

    The upper bound is an asymptotic statement, so small-n excess is data,
    not failure.
    """
    report = max_t_intersecting_exact(n, t, budget)
    if report.exact_max < report.construction_size:
        raise InvariantViolation("search result smaller than a known construction")
    return report
