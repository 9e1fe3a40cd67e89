"""Undirected simple graphs, structural classifiers and DIMACS ``.col`` I/O."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

log = logging.getLogger(__name__)


class GraphError(ValueError):
    """Raised for invalid graph construction input."""


class DimacsError(ValueError):
    """Raised for malformed DIMACS text."""


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph on vertices ``0..n-1``.

    ``edges`` holds normalised pairs ``(u, v)`` with ``u < v``, sorted.
    ``adjacency[v]`` is the ascending tuple of neighbours of ``v``.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def n(self) -> int:
        return self.vertex_count

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    def has_edge(self, u: int, v: int) -> bool:
        a = self.adjacency[u]
        # adjacency is short in every graph this package builds
        return v in a

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    def components(self) -> list[list[int]]:
        seen = [False] * self.vertex_count
        comps = []
        for s in range(self.vertex_count):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self.adjacency[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.vertex_count <= 1 or len(self.components()) == 1

    def is_forest(self) -> bool:
        return self.m == self.vertex_count - len(self.components())


def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a :class:`Graph`, dropping duplicate and reversed pairs."""
    if n < 0:
        raise GraphError(f"vertex count must be non-negative, got {n}")
    pairs = set()
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            raise GraphError(f"edge ({u}, {v}) is a self-loop")
        pairs.add((u, v) if u < v else (v, u))
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in pairs:
        adj[u].append(v)
        adj[v].append(u)
    return Graph(
        vertex_count=n,
        edges=tuple(sorted(pairs)),
        adjacency=tuple(tuple(sorted(a)) for a in adj),
    )


@dataclass(frozen=True)
class BrooksClass:
    kind: str  # "complete" | "odd_ring" | "other"
    connected: bool


def classify_brooks(g: Graph) -> BrooksClass:
    """Classify ``g`` against the two exceptional families of Brooks' theorem."""
    n = g.vertex_count
    connected = g.is_connected()
    if n >= 1 and g.m == n * (n - 1) // 2:
        kind = "complete"
    elif connected and n % 2 == 1 and n >= 3 and all(d == 2 for d in g.degrees):
        kind = "odd_ring"
    else:
        kind = "other"
    return BrooksClass(kind, connected)


def induces_k1_p3(g: Graph, vertices: Iterable[int]) -> bool:
    """True iff the 4 given vertices induce an isolated vertex plus a 3-vertex path."""
    vs = list(vertices)
    if len(vs) != 4:
        return False
    deg = {v: 0 for v in vs}
    edges = 0
    for a, b in combinations(vs, 2):
        if g.has_edge(a, b):
            edges += 1
            deg[a] += 1
            deg[b] += 1
    # the only 4-vertex graphs with 2 edges are 2K2 and K1+P3
    return edges == 2 and sorted(deg.values()) == [0, 1, 1, 2]


@dataclass(frozen=True)
class NeighbourhoodReport:
    max_degree: int
    degree4_vertices: tuple[int, ...]
    failing_vertices: tuple[int, ...]
    all_induce_k1_p3: bool


def neighbourhood_class_check(g: Graph) -> NeighbourhoodReport:
    """Check that Δ ≤ 4 and every degree-4 neighbourhood induces K1 ∪ P3."""
    d4 = tuple(v for v in range(g.n) if g.degree(v) == 4)
    failing = tuple(v for v in d4 if not induces_k1_p3(g, g.adjacency[v]))
    ok = g.max_degree <= 4 and not failing
    return NeighbourhoodReport(g.max_degree, d4, failing, ok)


def parse_dimacs(text: str, strict: bool = True) -> Graph:
    """Parse DIMACS ``.col`` text (1-indexed vertices).

    With ``strict`` an edge-count mismatch against the ``p`` line raises;
    otherwise it is logged as a warning. Duplicate edge lines are merged.
    """
    n = None
    declared_m = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise DimacsError(f"line {lineno}: duplicate problem line")
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise DimacsError(f"line {lineno}: malformed problem line {line!r}")
            try:
                n, declared_m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed problem line {line!r}") from None
            if n < 0 or declared_m < 0:
                raise DimacsError(f"line {lineno}: negative size in {line!r}")
        elif parts[0] == "e":
            if n is None:
                raise DimacsError(f"line {lineno}: edge before problem line")
            if len(parts) != 3:
                raise DimacsError(f"line {lineno}: malformed edge line {line!r}")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed edge line {line!r}") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise DimacsError(f"line {lineno}: vertex index out of range 1..{n} in {line!r}")
            if u == v:
                raise DimacsError(f"line {lineno}: self-loop {line!r}")
            edges.append((u - 1, v - 1))
        else:
            raise DimacsError(f"line {lineno}: unknown line type {parts[0]!r}")
    if n is None:
        raise DimacsError("missing problem line 'p edge n m'")
    g = from_edges(n, edges)
    if len(edges) != declared_m:
        msg = f"header declares {declared_m} edges, found {len(edges)} edge lines"
        if strict:
            raise DimacsError(msg)
        log.warning(msg)
    return g


def write_dimacs(g: Graph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"c {c}" for c in comment.splitlines())
    lines.append(f"p edge {g.n} {g.m}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_dimacs_file(path, strict: bool = True) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_dimacs(fh.read(), strict=strict)


def write_dimacs_file(g: Graph, path, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_dimacs(g, comment))
