"""Colourings, the neighbour-colour count table and incremental conflict accounting.

The table ``gamma[v][c]`` counts neighbours of ``v`` currently coloured ``c``.
From it the number of conflicting edges is half the sum of ``gamma[v][s(v)]``
and the effect of recolouring ``v`` to ``c`` is ``gamma[v][c] - gamma[v][s(v)]``,
an O(1) lookup.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .graph import Graph


class ColoringError(ValueError):
    pass


@dataclass(frozen=True)
class Coloring:
    colours: tuple[int, ...]
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ColoringError(f"colour count must be >= 1, got {self.k}")
        bad = [c for c in self.colours if not 0 <= c < self.k]
        if bad:
            raise ColoringError(f"colour {bad[0]} outside 0..{self.k - 1}")

    def __len__(self):
        return len(self.colours)

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.k)]
        for v, c in enumerate(self.colours):
            out[c].append(v)
        return out

    def colours_used(self) -> int:
        return len(set(self.colours))


@dataclass(frozen=True)
class Move:
    vertex: int
    new_colour: int
    delta: int


def random_coloring(g: Graph, k: int, rng: random.Random) -> Coloring:
    """Assign every vertex an independent uniform colour from ``0..k-1``."""
    if k < 1:
        raise ColoringError(f"colour count must be >= 1, got {k}")
    randrange = rng.randrange
    return Coloring(tuple(randrange(k) for _ in range(g.n)), k)


def conflict_count_direct(g: Graph, colours: Sequence[int] | Coloring) -> int:
    """Count monochromatic edges by scanning the edge list."""
    s = colours.colours if isinstance(colours, Coloring) else colours
    return sum(1 for u, v in g.edges if s[u] == s[v])


class GammaTable:
    """Mutable search state: colouring, neighbour-colour counts, conflicts.

    Owned by a single solver run. ``conflicting`` holds every vertex with at
    least one same-coloured neighbour.
    """

    __slots__ = ("graph", "k", "colours", "gamma", "conflict_count", "conflicting")

    def __init__(self, graph: Graph, k: int, colours: list[int], gamma: list[list[int]],
                 conflict_count: int, conflicting: set[int]):
        self.graph = graph
        self.k = k
        self.colours = colours
        self.gamma = gamma
        self.conflict_count = conflict_count
        self.conflicting = conflicting

    def coloring(self) -> Coloring:
        return Coloring(tuple(self.colours), self.k)

    def copy(self) -> GammaTable:
        return GammaTable(self.graph, self.k, list(self.colours),
                          [list(r) for r in self.gamma], self.conflict_count,
                          set(self.conflicting))

    def __eq__(self, other):
        if not isinstance(other, GammaTable):
            return NotImplemented
        return (self.graph is other.graph or self.graph == other.graph) and (
            self.k == other.k
            and self.colours == other.colours
            and self.gamma == other.gamma
            and self.conflict_count == other.conflict_count
            and self.conflicting == other.conflicting
        )

    def __repr__(self):
        return (f"GammaTable(n={self.graph.n}, k={self.k}, "
                f"conflicts={self.conflict_count}, |C|={len(self.conflicting)})")

    def move_count(self) -> int:
        return (self.k - 1) * len(self.conflicting)

    def moves(self) -> list[Move]:
        """Every legal move, ordered by vertex then colour."""
        out = []
        for v in sorted(self.conflicting):
            row = self.gamma[v]
            cur = row[self.colours[v]]
            out.extend(Move(v, c, row[c] - cur) for c in range(self.k) if c != self.colours[v])
        return out


def build_table(g: Graph, s: Coloring | Sequence[int], k: int | None = None) -> GammaTable:
    """Build the table from scratch in O(n*k + m)."""
    if isinstance(s, Coloring):
        k = s.k if k is None else k
        colours = list(s.colours)
    else:
        colours = list(s)
        if k is None:
            raise ColoringError("colour count k required for a bare colour sequence")
    if k < 1:
        raise ColoringError(f"colour count must be >= 1, got {k}")
    if len(colours) != g.n:
        raise ColoringError(f"colouring has length {len(colours)}, graph has {g.n} vertices")
    if any(not 0 <= c < k for c in colours):
        raise ColoringError(f"colours must lie in 0..{k - 1}")
    gamma = [[0] * k for _ in range(g.n)]
    for u, v in g.edges:
        gamma[u][colours[v]] += 1
        gamma[v][colours[u]] += 1
    conflicting = {v for v in range(g.n) if gamma[v][colours[v]] > 0}
    total = sum(gamma[v][colours[v]] for v in conflicting)
    return GammaTable(g, k, colours, gamma, total // 2, conflicting)


def move_delta(t: GammaTable, v: int, c: int) -> int:
    cur = t.colours[v]
    if c == cur:
        raise ColoringError(f"vertex {v} already has colour {c}; not a move")
    if not 0 <= c < t.k:
        raise ColoringError(f"colour {c} outside 0..{t.k - 1}")
    row = t.gamma[v]
    return row[c] - row[cur]


def apply_move(t: GammaTable, v: int | Move, c: int | None = None) -> int:
    """Recolour ``v`` to ``c`` in O(deg(v)), returning the change in conflicts."""
    if isinstance(v, Move):
        v, c = v.vertex, v.new_colour
    colours = t.colours
    old = colours[v]
    if c == old:
        raise ColoringError(f"vertex {v} already has colour {c}; not a move")
    if not 0 <= c < t.k:
        raise ColoringError(f"colour {c} outside 0..{t.k - 1}")
    gamma = t.gamma
    conflicting = t.conflicting
    for w in t.graph.adjacency[v]:
        gw = gamma[w]
        gw[old] -= 1
        gw[c] += 1
        sw = colours[w]
        if sw == old:
            if gw[old] == 0:
                conflicting.discard(w)
        elif sw == c:
            conflicting.add(w)
    row = gamma[v]
    delta = row[c] - row[old]
    colours[v] = c
    t.conflict_count += delta
    if row[c]:
        conflicting.add(v)
    else:
        conflicting.discard(v)
    return delta


def lemma2_best_colour(t: GammaTable, v: int, rng: random.Random | None = None) -> tuple[int, int]:
    """Least-loaded colour for ``v`` other than its own, as ``(colour, count)``.

    Ties are broken uniformly with ``rng``, or towards the smallest colour
    when no generator is given. Whenever ``v`` has more than
    ``deg(v) // k`` same-coloured neighbours the returned count is at most
    ``deg(v) // k`` (pigeonhole over the remaining colours).
    """
    if t.k < 2:
        raise ColoringError("need at least two colours to recolour a vertex")
    row = t.gamma[v]
    cur = t.colours[v]
    best = min(row[c] for c in range(t.k) if c != cur)
    ties = [c for c in range(t.k) if c != cur and row[c] == best]
    c = ties[0] if rng is None or len(ties) == 1 else rng.choice(ties)
    return c, best


def format_coloring(s: Coloring | Sequence[int]) -> str:
    colours = s.colours if isinstance(s, Coloring) else s
    return "".join(f"v {v} {c}\n" for v, c in enumerate(colours))


def parse_coloring(text: str, k: int | None = None) -> Coloring:
    """Parse ``v <index> <colour>`` lines (0-indexed); every vertex must appear once."""
    found: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] != "v":
            raise ColoringError(f"line {lineno}: expected 'v <index> <colour>', got {line!r}")
        v, c = int(parts[1]), int(parts[2])
        if v in found:
            raise ColoringError(f"line {lineno}: vertex {v} listed twice")
        if v < 0 or c < 0:
            raise ColoringError(f"line {lineno}: negative index or colour")
        found[v] = c
    n = len(found)
    if sorted(found) != list(range(n)):
        raise ColoringError("vertex indices must be exactly 0..n-1")
    colours = tuple(found[v] for v in range(n))
    return Coloring(colours, k if k is not None else max(colours, default=0) + 1)
