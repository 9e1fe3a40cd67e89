"""Deterministic generators for the instance families under study.

Vertex labelling is fixed so experiments can address structural roles:

``forest_g2(c)``
    Tree ``t`` occupies vertices ``14t .. 14t+13``. Offsets within a tree:
    ``A=0, B=1`` (the central edge), ``C=2, D=3`` (children of A),
    ``E=4, F=5`` (children of B), then two leaves each for C (6, 7),
    D (8, 9), E (10, 11) and F (12, 13).

``legs_g3(L)``
    Vertex 0 is the central vertex. Leg ``i`` occupies ``1+5i .. 5+5i`` with
    offsets ``a=0, b=1`` (degree 4, both adjacent to the centre and to each
    other), ``p=2`` (the degree-2 pick vertex on a and b), ``la=3`` and
    ``lb=4`` (leaves on a and b).
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass

from .graph import Graph, classify_brooks, from_edges

G2_TREE_SIZE = 14
G2_ROLES = ("A", "B", "C", "D", "E", "F",
            "C1", "C2", "D1", "D2", "E1", "E2", "F1", "F2")
G3_LEG_SIZE = 5
G3_ROLES = ("a", "b", "p", "la", "lb")
G3_CENTRE = 0

# Smallest graph on which DSATUR never finds an optimal colouring: chromatic
# number 3, every DSATUR run uses 4 colours. Found by exhaustive search over
# 8-vertex graphs with maximum degree 4; it is the unique such graph.
G1_EDGES = (
    (0, 3), (0, 4), (0, 7), (1, 2), (1, 3), (1, 4),
    (2, 5), (2, 6), (2, 7), (3, 4), (5, 7), (6, 7),
)


class InstanceError(ValueError):
    pass


def path(n: int) -> Graph:
    if n < 1:
        raise InstanceError(f"path needs n >= 1, got {n}")
    return from_edges(n, [(i, i + 1) for i in range(n - 1)])


def ring(n: int) -> Graph:
    if n < 3:
        raise InstanceError(f"ring needs n >= 3, got {n}")
    return from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    if n < 3:
        raise InstanceError(f"complete graph family needs n >= 3, got {n}")
    return from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def g1() -> Graph:
    return from_edges(8, G1_EDGES)


def g2_vertex(tree: int, role: str) -> int:
    return G2_TREE_SIZE * tree + G2_ROLES.index(role)


def forest_g2(c: int) -> Graph:
    """``c`` disjoint copies of the 14-vertex trap tree (max degree 3)."""
    if c < 1:
        raise InstanceError(f"forest_g2 needs c >= 1, got {c}")
    edges = []
    for t in range(c):
        v = {r: g2_vertex(t, r) for r in G2_ROLES}
        edges += [(v["A"], v["B"]), (v["A"], v["C"]), (v["A"], v["D"]),
                  (v["B"], v["E"]), (v["B"], v["F"])]
        for x in "CDEF":
            edges += [(v[x], v[x + "1"]), (v[x], v[x + "2"])]
    return from_edges(G2_TREE_SIZE * c, edges)


def g3_vertex(leg: int, role: str) -> int:
    return 1 + G3_LEG_SIZE * leg + G3_ROLES.index(role)


def legs_g3(L: int) -> Graph:
    """Central vertex joined to ``L`` legs, each a diamond plus two leaves."""
    if L < 2:
        raise InstanceError(f"legs_g3 needs L >= 2, got {L}")
    edges = []
    for i in range(L):
        a, b, p, la, lb = (g3_vertex(i, r) for r in G3_ROLES)
        edges += [(G3_CENTRE, a), (G3_CENTRE, b), (a, b), (a, p), (b, p), (a, la), (b, lb)]
    return from_edges(1 + G3_LEG_SIZE * L, edges)


def bounded_degree_random(n: int, delta_max: int, seed: int) -> Graph:
    """Insert all vertex pairs in shuffled order, skipping any that would exceed ``delta_max``."""
    if n < 1:
        raise InstanceError(f"need n >= 1, got {n}")
    if delta_max < 0:
        raise InstanceError(f"need delta_max >= 0, got {delta_max}")
    rng = random.Random(seed)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rng.shuffle(pairs)
    deg = [0] * n
    edges = []
    for u, v in pairs:
        if deg[u] < delta_max and deg[v] < delta_max:
            deg[u] += 1
            deg[v] += 1
            edges.append((u, v))
    return from_edges(n, edges)


def is_brooks_regular(g: Graph) -> bool:
    """Connected and neither complete nor an odd ring."""
    cls = classify_brooks(g)
    return cls.connected and cls.kind == "other"


def g2_trap_coloring(c: int, trapped=(0,)) -> list[int]:
    """2-colouring of ``forest_g2(c)`` whose only conflicts are A-B in the ``trapped`` trees.

    In a trapped tree A, B and all leaves get colour 0 and C, D, E, F get 1;
    other trees are coloured properly.
    """
    s = [0] * (G2_TREE_SIZE * c)
    for t in range(c):
        v = lambda r: g2_vertex(t, r)
        if t in trapped:
            for r in "CDEF":
                s[v(r)] = 1
        else:
            s[v("B")] = 1
            for r in ("C", "D", "E1", "E2", "F1", "F2"):
                s[v(r)] = 1
    return s


def g3_trap_coloring(L: int) -> list[int]:
    """3-colouring of ``legs_g3(L)`` that blocks the search.

    Centre gets colour 0. Leg 0 has a, b in {0, 1} with its pick vertex and
    leaves on 2; leg 1 has a, b in {0, 2} with the rest on 1. Every other leg
    is coloured properly (a=1, b=2, rest 0). The two conflicts are centre-a in
    legs 0 and 1.
    """
    if L < 2:
        raise InstanceError(f"legs_g3 needs L >= 2, got {L}")
    s = [0] * (1 + G3_LEG_SIZE * L)
    for i in range(L):
        a, b, p, la, lb = (g3_vertex(i, r) for r in G3_ROLES)
        if i == 0:
            s[a], s[b], rest = 0, 1, 2
        elif i == 1:
            s[a], s[b], rest = 0, 2, 1
        else:
            s[a], s[b], rest = 1, 2, 0
        s[p] = s[la] = s[lb] = rest
    return s


_FAMILY_ALIASES = {
    "path": "path", "ring": "ring", "complete": "complete", "k": "complete",
    "g1": "g1", "g2": "forest_g2", "forest_g2": "forest_g2",
    "g3": "legs_g3", "legs_g3": "legs_g3",
    "rand": "bounded_degree_random", "bounded_degree_random": "bounded_degree_random",
}
_SHORT = {"forest_g2": "g2", "legs_g3": "g3", "bounded_degree_random": "rand"}


@dataclass(frozen=True)
class InstanceSpec:
    """A named, parameterised instance such as ``path:100`` or ``rand:200:3:seed7``."""

    family: str
    params: tuple[int, ...] = ()
    seed: int | None = None

    @classmethod
    def parse(cls, text: str) -> InstanceSpec:
        parts = text.strip().split(":")
        family = _FAMILY_ALIASES.get(parts[0].lower())
        if family is None:
            raise InstanceError(f"unknown instance family {parts[0]!r}")
        args = parts[1:]
        seed = None
        if family == "bounded_degree_random":
            if len(args) not in (2, 3):
                raise InstanceError(f"expected rand:<n>:<delta>[:seed<S>], got {text!r}")
            if len(args) == 3:
                m = re.fullmatch(r"(?:seed)?(-?\d+)", args[2])
                if not m:
                    raise InstanceError(f"bad seed {args[2]!r}")
                seed = int(m.group(1))
                args = args[:2]
            else:
                seed = 0
        try:
            params = tuple(int(a) for a in args)
        except ValueError:
            raise InstanceError(f"non-integer parameter in {text!r}") from None
        want = {"g1": 0, "bounded_degree_random": 2}.get(family, 1)
        if len(params) != want:
            raise InstanceError(f"{family} takes {want} parameter(s), got {text!r}")
        return cls(family, params, seed)

    def __str__(self):
        head = _SHORT.get(self.family, self.family)
        s = ":".join([head, *map(str, self.params)])
        if self.seed is not None:
            s += f":seed{self.seed}"
        return s

    def build(self) -> Graph:
        f = self.family
        if f == "path":
            return path(*self.params)
        if f == "ring":
            return ring(*self.params)
        if f == "complete":
            return complete(*self.params)
        if f == "g1":
            return g1()
        if f == "forest_g2":
            return forest_g2(*self.params)
        if f == "legs_g3":
            return legs_g3(*self.params)
        if f == "bounded_degree_random":
            return bounded_degree_random(*self.params, self.seed or 0)
        raise InstanceError(f"unknown family {f!r}")


def build_instance(text: str) -> Graph:
    return InstanceSpec.parse(text).build()
