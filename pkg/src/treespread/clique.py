"""Exact maximum clique by branch and bound over Python-int bitsets.

Greedy sequential colouring supplies the upper bound at every node, in the
style of Tomita's MCQ and San Segundo's bitset variant.  The search is
deterministic: vertices are renumbered by non-increasing degree (ties by
original index) and expanded in a fixed order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class CliqueResult:
    clique: tuple[int, ...]
    exact: bool
    nodes: int


class _Budget(Exception):
    pass


def _color_sort(p: int, adj: Sequence[int]) -> tuple[list[int], list[int]]:
    """Vertices of ``p`` in colour-class order with their cumulative colour."""
    order, bounds = [], []
    color = 0
    uncolored = p
    while uncolored:
        color += 1
        q = uncolored
        while q:
            low = q & -q
            v = low.bit_length() - 1
            q &= ~adj[v] & ~low
            uncolored &= ~low
            order.append(v)
            bounds.append(color)
    return order, bounds


def max_clique(
    adj: Sequence[int],
    lower_bound: Sequence[int] = (),
    budget: int | None = None,
    floor: int = 0,
) -> CliqueResult:
    """Maximum clique of the graph with bitset adjacency ``adj``.

    ``lower_bound`` is a known clique used as the initial incumbent; it is
    returned unchanged when nothing larger exists.  With ``floor`` only
    cliques larger than ``floor`` are searched for.  ``budget`` caps the
    number of search nodes; when it runs out the incumbent comes back with
    ``exact=False``.
    """
    n = len(adj)
    if n == 0:
        return CliqueResult((), True, 0)
    perm = sorted(range(n), key=lambda v: (-bin(adj[v]).count("1"), v))
    pos = {v: i for i, v in enumerate(perm)}
    radj = [0] * n
    for i, v in enumerate(perm):
        bits = 0
        a = adj[v]
        while a:
            low = a & -a
            bits |= 1 << pos[low.bit_length() - 1]
            a ^= low
        radj[i] = bits

    best = [pos[v] for v in lower_bound]
    if not best and floor <= 0:
        best = [0]
    target = max(len(best), floor)
    nodes = 0

    def expand(current: list[int], p: int):
        nonlocal best, target, nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise _Budget
        order, bounds = _color_sort(p, radj)
        for idx in range(len(order) - 1, -1, -1):
            if len(current) + bounds[idx] <= target:
                return
            v = order[idx]
            current.append(v)
            newp = p & radj[v]
            if newp:
                expand(current, newp)
            elif len(current) > target:
                best = list(current)
                target = len(best)
            current.pop()
            p &= ~(1 << v)

    exact = True
    try:
        expand([], (1 << n) - 1)
    except _Budget:
        exact = False
    return CliqueResult(tuple(sorted(perm[i] for i in best)), exact, nodes)
