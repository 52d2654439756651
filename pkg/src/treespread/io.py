"""Text formats for forests, families and event lists.

Forest file::

    n m
    u v        (m lines, 1 <= u < v <= n, sorted)

Family file::

    n count
    u-v u-v ...   (one member per line, edges sorted; "{}" is the empty member)

Event list: one forest per line as ``u-v`` tokens (``{}`` for the empty
forest), no header.  In all three, blank lines and lines starting with
``#`` are ignored.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .errors import InvalidInput
from .family import EdgeUniverse, SetFamily
from .trees import Edge, Forest, parse_edge

EMPTY_MEMBER = "{}"


def _content_lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def _header(line: str, what: str) -> tuple[int, int]:
    parts = line.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise InvalidInput(f"malformed {what} header {line!r}; expected two integers")
    return int(parts[0]), int(parts[1])


def parse_forest(text: str) -> Forest:
    lines = _content_lines(text)
    if not lines:
        raise InvalidInput("empty forest file")
    n, m = _header(lines[0], "forest")
    body = lines[1:]
    if len(body) != m:
        raise InvalidInput(f"forest header announces {m} edges, found {len(body)}")
    edges = []
    for line in body:
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise InvalidInput(f"malformed edge line {line!r}")
        u, v = int(parts[0]), int(parts[1])
        if not 1 <= u < v <= n:
            raise InvalidInput(f"edge line {line!r} violates 1 <= u < v <= {n}")
        edges.append((u, v))
    if len(set(edges)) != len(edges):
        raise InvalidInput("duplicate edge in forest file")
    return Forest.of(n, edges)


def format_forest(f: Forest) -> str:
    edges = f.sorted_edges()
    lines = [f"{f.n} {len(edges)}"] + [f"{e.u} {e.v}" for e in edges]
    return "\n".join(lines) + "\n"


def _parse_member(line: str) -> list[Edge]:
    if line == EMPTY_MEMBER:
        return []
    return [parse_edge(tok) for tok in line.split()]


def _format_edges(edges: Iterable[Edge]) -> str:
    edges = sorted(edges)
    return " ".join(str(e) for e in edges) if edges else EMPTY_MEMBER


def parse_family(text: str) -> SetFamily:
    lines = _content_lines(text)
    if not lines:
        raise InvalidInput("empty family file")
    n, count = _header(lines[0], "family")
    body = lines[1:]
    if len(body) != count:
        raise InvalidInput(f"family header announces {count} members, found {len(body)}")
    universe = EdgeUniverse(n)
    members = [universe.ranks(_parse_member(line)) for line in body]
    return SetFamily(universe, tuple(members))


def format_family(a: SetFamily) -> str:
    lines = [f"{a.n} {len(a)}"]
    lines += [_format_edges(a.universe.edges(m)) for m in a.members]
    return "\n".join(lines) + "\n"


def parse_events(text: str, n: int) -> list[Forest]:
    return [Forest.of(n, _parse_member(line)) for line in _content_lines(text)]


def format_events(events: Iterable[Forest]) -> str:
    return "".join(_format_edges(h.edges) + "\n" for h in events)


def parse_edge_list(text: str) -> list[Edge]:
    """Inline edge list: ``"1-2 3-4"`` or ``"1-2,3-4"``; ``{}`` or blank is empty."""
    text = text.strip()
    if text in ("", EMPTY_MEMBER):
        return []
    return [parse_edge(tok) for tok in text.replace(",", " ").split()]


def read_forest(path) -> Forest:
    return parse_forest(Path(path).read_text())


def read_family(path) -> SetFamily:
    return parse_family(Path(path).read_text())


def write_family(path, a: SetFamily) -> None:
    Path(path).write_text(format_family(a))
