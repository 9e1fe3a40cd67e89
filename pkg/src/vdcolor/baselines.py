"""Reference colouring algorithms: DSATUR and exact backtracking."""

from __future__ import annotations

import random
import sys
from dataclasses import dataclass

from .coloring import Coloring
from .graph import Graph


class BudgetExceeded(RuntimeError):
    """A search hit its node or branch budget before reaching an answer."""


@dataclass(frozen=True)
class DsaturResult:
    colouring: Coloring
    colours_used: int
    decision_trace: tuple[tuple[int, int], ...] = ()


def _tie_degree(g: Graph, col: list[int], v: int, degree_rule: str) -> int:
    if degree_rule == "static":
        return len(g.adjacency[v])
    return sum(1 for w in g.adjacency[v] if col[w] < 0)


def _candidates(g: Graph, col: list[int], degree_rule: str) -> tuple[list[int], int]:
    """Uncoloured vertices of maximum saturation, then maximum degree."""
    best_key = None
    cands: list[int] = []
    for v in range(g.n):
        if col[v] >= 0:
            continue
        sat = len({col[w] for w in g.adjacency[v] if col[w] >= 0})
        key = (sat, _tie_degree(g, col, v, degree_rule))
        if best_key is None or key > best_key:
            best_key, cands = key, [v]
        elif key == best_key:
            cands.append(v)
    return cands, (best_key[0] if cands else 0)


def _smallest_free(g: Graph, col: list[int], v: int) -> int:
    used = {col[w] for w in g.adjacency[v]}
    c = 0
    while c in used:
        c += 1
    return c


def dsatur(g: Graph, tie_break: str = "lexicographic", seed: int | None = None,
           degree_rule: str = "static") -> DsaturResult:
    """Brélaz's DSATUR.

    Picks the uncoloured vertex of highest saturation (number of distinct
    colours among its neighbours), breaking ties by highest degree and then
    by ``tie_break``: ``"lexicographic"`` (lowest index) or ``"random"``
    (uniform, seeded). ``degree_rule`` selects the degree used for the
    secondary tie-break: ``"static"`` (degree in ``g``) or ``"uncoloured"``
    (degree into the uncoloured vertices).
    """
    if tie_break not in ("lexicographic", "random"):
        raise ValueError(f"unknown tie_break {tie_break!r}")
    if degree_rule not in ("static", "uncoloured"):
        raise ValueError(f"unknown degree_rule {degree_rule!r}")
    rng = random.Random(seed)
    col = [-1] * g.n
    trace = []
    for _ in range(g.n):
        cands, sat = _candidates(g, col, degree_rule)
        v = cands[0] if tie_break == "lexicographic" else rng.choice(cands)
        col[v] = _smallest_free(g, col, v)
        trace.append((v, sat))
    used = max(col, default=-1) + 1
    return DsaturResult(Coloring(tuple(col), max(used, 1)), used, tuple(trace))


def dsatur_enumerate(g: Graph, branch_limit: int = 1_000_000,
                     degree_rule: str = "static") -> tuple[int, int]:
    """Fewest and most colours DSATUR can use over every tie-break resolution.

    Explores all choice points depth-first. Partial colourings reached through
    different choice orders are merged, since the rest of the run depends only
    on the partial colouring. Raises :class:`BudgetExceeded` once more than
    ``branch_limit`` distinct partial colourings have been expanded.
    """
    if g.n == 0:
        return 0, 0
    memo: dict[tuple[int, ...], tuple[int, int]] = {}

    def rec(col: list[int]) -> tuple[int, int]:
        key = tuple(col)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if len(memo) >= branch_limit:
            raise BudgetExceeded(f"DSATUR enumeration exceeded {branch_limit} branches")
        cands, _ = _candidates(g, col, degree_rule)
        if not cands:
            used = max(col) + 1
            memo[key] = (used, used)
            return used, used
        lo, hi = g.n + 1, 0
        for v in cands:
            col[v] = _smallest_free(g, col, v)
            a, b = rec(col)
            col[v] = -1
            lo, hi = min(lo, a), max(hi, b)
        memo[key] = (lo, hi)
        return lo, hi

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * g.n + 100))
    try:
        return rec([-1] * g.n)
    finally:
        sys.setrecursionlimit(old)


def greedy_clique(g: Graph) -> list[int]:
    """A large clique found by greedy extension from every vertex."""
    best: list[int] = []
    order = sorted(range(g.n), key=lambda v: -g.degree(v))
    for s in order:
        if g.degree(s) + 1 <= len(best):
            continue
        clique = [s]
        cand = set(g.adjacency[s])
        while cand:
            v = max(cand, key=lambda x: (len(cand.intersection(g.adjacency[x])), -x))
            clique.append(v)
            cand.intersection_update(g.adjacency[v])
        if len(clique) > len(best):
            best = clique
    return sorted(best)


def k_colorable(g: Graph, k: int, node_budget: int = 5_000_000) -> tuple[bool, Coloring | None]:
    """Exact k-colourability by backtracking with DSATUR vertex ordering.

    Colour symmetry is broken by never opening more than one new colour at a
    time. Raises :class:`BudgetExceeded` rather than running past
    ``node_budget`` search nodes.
    """
    n = g.n
    if n == 0:
        return True, Coloring((), max(k, 1))
    if k < 1:
        return False, None
    adj = g.adjacency
    col = [-1] * n
    # counts[v][c]: neighbours of v holding colour c
    counts = [[0] * k for _ in range(n)]
    nodes = 0

    def pick() -> int:
        best, bv = None, -1
        for v in range(n):
            if col[v] < 0:
                row = counts[v]
                key = (sum(1 for x in row if x), len(adj[v]))
                if best is None or key > best:
                    best, bv = key, v
        return bv

    def rec(depth: int, used: int) -> bool:
        nonlocal nodes
        if depth == n:
            return True
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded(f"k_colorable(k={k}) exceeded {node_budget} nodes; undecided")
        v = pick()
        row = counts[v]
        for c in range(min(used + 1, k)):
            if row[c]:
                continue
            col[v] = c
            for w in adj[v]:
                counts[w][c] += 1
            if rec(depth + 1, max(used, c + 1)):
                return True
            for w in adj[v]:
                counts[w][c] -= 1
            col[v] = -1
        return False

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * n + 100))
    try:
        ok = rec(0, 0)
    finally:
        sys.setrecursionlimit(old)
    return (True, Coloring(tuple(col), k)) if ok else (False, None)


def exact_chromatic(g: Graph, node_budget: int = 5_000_000) -> int:
    """Chromatic number, searched upward from a greedy clique bound."""
    if g.n == 0:
        return 0
    lower = max(len(greedy_clique(g)), 1)
    upper = dsatur(g).colours_used
    for k in range(lower, upper):
        ok, _ = k_colorable(g, k, node_budget)
        if ok:
            return k
    return upper
