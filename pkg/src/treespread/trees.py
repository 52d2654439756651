"""Labeled forests and spanning trees of K_n: Prüfer coding, enumeration,
exact counting and exact uniform sampling.

Vertices are labeled 1..n.  Edges are stored canonically as ``Edge(u, v)``
with ``u < v``.  Every count is a Python ``int``; every probability-like
quantity elsewhere in the package is a ``Fraction`` built from these.
"""

from __future__ import annotations

import heapq
import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence

from ._exact import as_fraction, ceil_power
from .errors import InvalidInput, ResourceLimit

DEFAULT_ENUMERATION_CAP = 10
DEFAULT_DEGREE_SUM_THRESHOLD = 8


class Edge(NamedTuple):
    u: int
    v: int

    @classmethod
    def of(cls, a: int, b: int) -> "Edge":
        if a == b:
            raise InvalidInput(f"loop at vertex {a} is not an edge")
        return cls(a, b) if a < b else cls(b, a)

    def rank(self, n: int) -> int:
        """Lexicographic rank in 1..C(n, 2)."""
        u, v = self
        return (u - 1) * n - u * (u - 1) // 2 + (v - u)

    def __str__(self) -> str:
        return f"{self.u}-{self.v}"


def edge_from_rank(rank: int, n: int) -> Edge:
    if not 1 <= rank <= n * (n - 1) // 2:
        raise InvalidInput(f"edge rank {rank} outside 1..{n * (n - 1) // 2}")
    u = 1
    # row u holds ranks (u-1)n - u(u-1)/2 + 1 .. that + (n - u)
    while rank > (n - u):
        rank -= n - u
        u += 1
    return Edge(u, u + rank)


def parse_edge(token: str) -> Edge:
    """Parse ``"u-v"`` (also ``"u,v"`` or ``"uv"`` for single digits)."""
    token = token.strip()
    for sep in ("-", ","):
        if sep in token:
            a, b = token.split(sep, 1)
            return Edge.of(int(a), int(b))
    if len(token) == 2 and token.isdigit():
        return Edge.of(int(token[0]), int(token[1]))
    raise InvalidInput(f"cannot parse edge token {token!r}")


class _DSU:
    __slots__ = ("parent", "size")

    def __init__(self, n: int):
        self.parent = list(range(n + 1))
        self.size = [1] * (n + 1)

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def _normalize_edges(n: int, edges: Iterable) -> frozenset[Edge]:
    out = set()
    for e in edges:
        e = parse_edge(e) if isinstance(e, str) else Edge.of(*e)
        if not (1 <= e.u and e.v <= n):
            raise InvalidInput(f"edge {e} outside vertex set [1, {n}]")
        out.add(e)
    return frozenset(out)


def is_acyclic(n: int, edges: Iterable[Edge]) -> bool:
    dsu = _DSU(n)
    return all(dsu.union(u, v) for u, v in edges)


@dataclass(frozen=True)
class Forest:
    """An acyclic edge set on the vertex set [n].

    ``n`` is part of the value: isolated vertices are components too, and
    the counting formulas depend on it.
    """

    n: int
    edges: frozenset[Edge]

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInput("a forest needs at least one vertex")
        edges = _normalize_edges(self.n, self.edges)
        object.__setattr__(self, "edges", edges)
        if not is_acyclic(self.n, edges):
            raise InvalidInput(f"edge set {sorted(map(str, edges))} contains a cycle")

    @classmethod
    def of(cls, n: int, edges: Iterable = ()) -> "Forest":
        return cls(n, frozenset(edges))

    @classmethod
    def _trusted(cls, n: int, edges: frozenset[Edge]):
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "edges", edges)
        return obj

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(sorted(self.edges))

    def __str__(self) -> str:
        return "{" + " ".join(str(e) for e in sorted(self.edges)) + "}"

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def vertices(self) -> frozenset[int]:
        """Endpoints of edges (isolated vertices excluded)."""
        return frozenset(x for e in self.edges for x in e)

    def degrees(self) -> list[int]:
        """Degree list indexed by vertex; index 0 is unused."""
        deg = [0] * (self.n + 1)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def component_map(self) -> list[int]:
        """Representative of each vertex's component (index 0 unused)."""
        dsu = _DSU(self.n)
        for u, v in self.edges:
            dsu.union(u, v)
        return [dsu.find(x) if x else 0 for x in range(self.n + 1)]

    def components(self) -> list[tuple[int, ...]]:
        """Vertex sets of all components, isolated vertices included,
        ordered by smallest vertex."""
        groups: dict[int, list[int]] = {}
        rep = self.component_map()
        for x in range(1, self.n + 1):
            groups.setdefault(rep[x], []).append(x)
        return sorted(tuple(g) for g in groups.values())

    def component_sizes(self) -> list[int]:
        return [len(c) for c in self.components()]

    def is_spanning_tree(self) -> bool:
        return len(self.edges) == self.n - 1

    def union(self, other: "Forest | Iterable") -> "Forest | None":
        """Union of edge sets, or ``None`` if it contains a cycle."""
        extra = other.edges if isinstance(other, Forest) else _normalize_edges(self.n, other)
        if isinstance(other, Forest) and other.n != self.n:
            raise InvalidInput("forests live on different vertex sets")
        edges = self.edges | extra
        if not is_acyclic(self.n, edges):
            return None
        return Forest._trusted(self.n, edges)

    def as_tree(self) -> "LabeledTree":
        return LabeledTree(self.n, self.edges)


class LabeledTree(Forest):
    """A spanning tree of K_n: a forest with exactly n - 1 edges."""

    def __post_init__(self):
        super().__post_init__()
        if len(self.edges) != self.n - 1:
            raise InvalidInput(
                f"{len(self.edges)} edges on {self.n} vertices is not a spanning tree"
            )


# ---------------------------------------------------------------- Prüfer codes

def prufer_encode(tree: Forest) -> list[int]:
    """Prüfer sequence of a spanning tree (repeatedly strip the smallest leaf)."""
    n = tree.n
    if n < 2:
        raise InvalidInput("Prüfer codes need n >= 2")
    if len(tree.edges) != n - 1:
        raise InvalidInput("only spanning trees have Prüfer codes")
    adj: list[set[int]] = [set() for _ in range(n + 1)]
    for u, v in tree.edges:
        adj[u].add(v)
        adj[v].add(u)
    leaves = [x for x in range(1, n + 1) if len(adj[x]) == 1]
    heapq.heapify(leaves)
    seq = []
    for _ in range(n - 2):
        leaf = heapq.heappop(leaves)
        (nb,) = adj[leaf]
        seq.append(nb)
        adj[nb].discard(leaf)
        adj[leaf].clear()
        if len(adj[nb]) == 1:
            heapq.heappush(leaves, nb)
    return seq


def _decode_edges(seq: Sequence[int], n: int) -> frozenset[Edge]:
    degree = [1] * (n + 1)
    for x in seq:
        degree[x] += 1
    leaves = [x for x in range(1, n + 1) if degree[x] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append(Edge(leaf, x) if leaf < x else Edge(x, leaf))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    a, b = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append(Edge(a, b) if a < b else Edge(b, a))
    return frozenset(edges)


def prufer_decode(seq: Sequence[int], n: int) -> LabeledTree:
    if n < 2:
        raise InvalidInput("Prüfer codes need n >= 2")
    if len(seq) != n - 2:
        raise InvalidInput(f"sequence of length {len(seq)} does not code a tree on {n} vertices")
    for x in seq:
        if not (isinstance(x, int) and 1 <= x <= n):
            raise InvalidInput(f"entry {x!r} outside [1, {n}]")
    return LabeledTree._trusted(n, _decode_edges(seq, n))


# ----------------------------------------------------------------- enumeration

def _supernode_trees(base: Forest) -> Iterator[frozenset[Edge]]:
    """Every spanning tree containing ``base``, via trees on its components."""
    comps = base.components()
    k = len(comps)
    if k == 1:
        yield base.edges
        return
    for seq in itertools.product(range(1, k + 1), repeat=k - 2):
        skeleton = _decode_edges(seq, k)
        links = [list(itertools.product(comps[i - 1], comps[j - 1])) for i, j in sorted(skeleton)]
        for choice in itertools.product(*links):
            yield base.edges | frozenset(Edge.of(a, b) for a, b in choice)


def enumerate_trees(
    n: int,
    contains: Forest | Iterable = (),
    avoids: Iterable = (),
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Iterator[LabeledTree]:
    """Yield every spanning tree T of K_n with ``contains`` ⊆ T and T ∩ ``avoids`` = ∅.

    Trees come out in lexicographic order of their Prüfer codes.  With an
    empty ``contains`` the stream is lazy; otherwise the (much smaller)
    set of trees containing the forest is generated through its component
    skeleton and then sorted.
    """
    if n > cap:
        raise ResourceLimit(f"exhaustive enumeration capped at n <= {cap}, got n = {n}")
    if n < 1:
        raise InvalidInput("n must be positive")
    base = contains if isinstance(contains, Forest) else Forest.of(n, contains)
    if base.n != n:
        raise InvalidInput("forest lives on a different vertex set")
    avoid = _normalize_edges(n, avoids)
    if avoid & base.edges:
        raise InvalidInput("avoided edges overlap the required forest")
    if n == 1:
        yield LabeledTree._trusted(1, frozenset())
        return
    if not base.edges:
        for seq in itertools.product(range(1, n + 1), repeat=n - 2):
            edges = _decode_edges(seq, n)
            if not (avoid and edges & avoid):
                yield LabeledTree._trusted(n, edges)
        return
    found = [e for e in _supernode_trees(base) if not (avoid and e & avoid)]
    found = [LabeledTree._trusted(n, e) for e in found]
    found.sort(key=prufer_encode)
    yield from found


# -------------------------------------------------------------------- counting

def count_containing(f: Forest) -> int:
    """Number of spanning trees of K_n containing the forest ``f``.

    Product of component sizes times n ** (n - 2 - |E(f)|); isolated
    vertices contribute a factor 1.
    """
    n = f.n
    product = math.prod(f.component_sizes())
    exponent = n - 2 - len(f.edges)
    if exponent >= 0:
        return product * n ** exponent
    # only a spanning tree gets here: product == n, exponent == -1
    return product // n ** (-exponent)


def _bareiss_det(m: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    a = [row[:] for row in m]
    size = len(a)
    if size == 0:
        return 1
    sign, prev = 1, 1
    for k in range(size - 1):
        if a[k][k] == 0:
            for r in range(k + 1, size):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def contracted_laplacian(forced: Forest) -> list[list[int]]:
    """Laplacian of K_n with each component of ``forced`` merged into one node.

    Between two merged nodes there are (size_i * size_j) parallel edges.
    """
    sizes = forced.component_sizes()
    n = forced.n
    k = len(sizes)
    return [
        [sizes[i] * (n - sizes[i]) if i == j else -sizes[i] * sizes[j] for j in range(k)]
        for i in range(k)
    ]


def matrix_tree_count(n: int, forced: Forest | Iterable = ()) -> int:
    """Count spanning trees containing ``forced`` as a Laplacian cofactor."""
    f = forced if isinstance(forced, Forest) else Forest.of(n, forced)
    if f.n != n:
        raise InvalidInput("forest lives on a different vertex set")
    lap = contracted_laplacian(f)
    minor = [row[:-1] for row in lap[:-1]]
    return _bareiss_det(minor)


def acyclic_extensions(base: Forest, extra: Sequence[Edge]) -> Iterator[tuple[int, Forest]]:
    """Yield ``(|E'|, base ∪ E')`` for every subset E' of ``extra`` whose
    union with ``base`` stays acyclic.  Cyclic branches are pruned, since
    every superset of a cyclic set is cyclic too."""
    extra = list(extra)

    def walk(start: int, current: Forest, size: int):
        yield size, current
        for idx in range(start, len(extra)):
            grown = current.union([extra[idx]])
            if grown is not None:
                yield from walk(idx + 1, grown, size + 1)

    yield from walk(0, base, 0)


def count_containing_avoiding(f: Forest, avoids: Iterable) -> int:
    """Spanning trees containing ``f`` and no edge of ``avoids``, by
    inclusion–exclusion over the avoided edges."""
    avoid = sorted(_normalize_edges(f.n, avoids))
    if set(avoid) & f.edges:
        raise InvalidInput("avoided edges overlap the required forest")
    return sum((-1) ** k * count_containing(g) for k, g in acyclic_extensions(f, avoid))


# ------------------------------------------------------------------ star-likes

def _adjacency_needed(n: int, c) -> Fraction:
    """n / c, the adjacency an edge needs to make a forest c-star-like."""
    if isinstance(c, float) and math.isinf(c):
        return Fraction(0)
    c = as_fraction(c)
    if c <= 0:
        raise InvalidInput("c must be positive")
    return Fraction(n) / c


def _max_adjacency(f: Forest) -> tuple[int, Edge | None]:
    """Largest number of edges adjacent to one edge, with the lex-first such edge."""
    deg = f.degrees()
    best, arg = -1, None
    for e in sorted(f.edges):
        adjacent = deg[e.u] + deg[e.v] - 2
        if adjacent > best:
            best, arg = adjacent, e
    return best, arg


def star_like_witness(f: Forest, c) -> Edge | None:
    """An edge of ``f`` adjacent to at least n/c other edges, or ``None``.

    Among qualifying edges the one with the most neighbours is returned
    (lexicographically smallest on ties).
    """
    best, arg = _max_adjacency(f)
    return arg if arg is not None and best >= _adjacency_needed(f.n, c) else None


def is_star_like(f: Forest, c) -> bool:
    return star_like_witness(f, c) is not None


def tree_degree_weight_sum(
    n: int,
    weights: Sequence[int],
    method: str = "auto",
    threshold: int = DEFAULT_DEGREE_SUM_THRESHOLD,
) -> int:
    """Sum over spanning trees T of prod_v weights[v-1] ** deg_T(v).

    ``method`` is ``"enumerate"``, ``"closed"`` (x1...xn (x1+...+xn)^(n-2))
    or ``"auto"`` (enumerate up to ``threshold`` vertices).
    """
    if n < 2:
        raise InvalidInput("need n >= 2")
    if len(weights) != n:
        raise InvalidInput(f"expected {n} weights, got {len(weights)}")
    if method == "auto":
        method = "enumerate" if n <= threshold else "closed"
    if method == "closed":
        return math.prod(weights) * sum(weights) ** (n - 2)
    if method != "enumerate":
        raise InvalidInput(f"unknown method {method!r}")
    total = 0
    w = [0, *weights]
    for seq in itertools.product(range(1, n + 1), repeat=n - 2):
        deg = [1] * (n + 1)
        for x in seq:
            deg[x] += 1
        term = 1
        for v in range(1, n + 1):
            term *= w[v] ** deg[v]
        total += term
    return total


class StarLikeCount(NamedTuple):
    exact: int
    paper_bound: int
    degree_threshold_applies: bool


def star_like_bound(n: int, c) -> int:
    """ceil(2^n * n^(n - n/(2c))); c = inf gives the limit 2^n n^n."""
    if c == math.inf:
        return 2 ** n * n ** n
    c = as_fraction(c)
    return ceil_power(n, n - Fraction(n) / (2 * c), factor=2 ** n)


def count_star_like_trees(n: int, c, cap: int = DEFAULT_ENUMERATION_CAP) -> StarLikeCount:
    if n > cap:
        raise ResourceLimit(f"star-like enumeration capped at n <= {cap}")
    need = _adjacency_needed(n, c)
    exact = 0
    for t in enumerate_trees(n, cap=cap):
        deg = t.degrees()
        if any(deg[u] + deg[v] - 2 >= need for u, v in t.edges):
            exact += 1
    applies = c != math.inf and Fraction(n) / (2 * as_fraction(c)) >= 1
    return StarLikeCount(exact, star_like_bound(n, c), applies)


# -------------------------------------------------------------------- sampling

def _as_rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def sample_tree_containing(f: Forest, seed) -> LabeledTree:
    """Exactly uniform sample from the spanning trees containing ``f``.

    Components of ``f`` become weighted supernodes (weight = size).  A
    Prüfer sequence over the supernodes is drawn with i.i.d. entries of
    probability size/n, which makes each skeleton tree appear with
    probability proportional to prod size_i ** deg(i); each skeleton edge
    is then realized by a uniform vertex on either side.  The two factors
    together give every tree in the fibre the same weight.
    """
    rng = _as_rng(seed)
    comps = f.components()
    k = len(comps)
    if k == 1:
        return LabeledTree._trusted(f.n, f.edges)
    weights = [len(c) for c in comps]
    seq = rng.choices(range(1, k + 1), weights=weights, k=k - 2)
    new = []
    for i, j in sorted(_decode_edges(seq, k)):
        new.append(Edge.of(rng.choice(comps[i - 1]), rng.choice(comps[j - 1])))
    return LabeledTree._trusted(f.n, f.edges | frozenset(new))


def sample_trees_containing(f: Forest, count: int, seed) -> Iterator[LabeledTree]:
    rng = _as_rng(seed)
    for _ in range(count):
        yield sample_tree_containing(f, rng)


# ---------------------------------------------------------- small constructors

def star(n: int, center: int = 1) -> LabeledTree:
    return LabeledTree.of(n, [(center, x) for x in range(1, n + 1) if x != center])


def path(n: int, vertices: Sequence[int] | None = None) -> Forest:
    """Path through ``vertices`` (default 1..n) on the vertex set [n]."""
    vs = list(range(1, n + 1)) if vertices is None else list(vertices)
    edges = list(zip(vs, vs[1:]))
    return LabeledTree.of(n, edges) if len(vs) == n else Forest.of(n, edges)


def matching(n: int, t: int) -> Forest:
    """The canonical t disjoint edges {1-2, 3-4, ...}."""
    if 2 * t > n:
        raise InvalidInput(f"{t} disjoint edges do not fit on {n} vertices")
    return Forest.of(n, [(2 * i + 1, 2 * i + 2) for i in range(t)])


def all_forests(n: int, max_edges: int | None = None) -> Iterator[Forest]:
    """Every labeled forest on [n], by edge count then lexicographically."""
    universe = [Edge(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    top = n - 1 if max_edges is None else min(max_edges, n - 1)
    for m in range(top + 1):
        for combo in itertools.combinations(universe, m):
            if is_acyclic(n, combo):
                yield Forest._trusted(n, frozenset(combo))
