"""The Vertex Descent local search loop.

Each step scans every recolouring of a conflicting vertex, keeps the moves
with the smallest change in conflicts and applies one of them chosen
uniformly at random. The chosen move is applied even when it makes things
worse; that is what makes trap instances oscillate forever.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

from .coloring import Coloring, ColoringError, GammaTable, Move, apply_move, build_table, random_coloring
from .graph import Graph

FEASIBLE = "feasible"
BUDGET_EXHAUSTED = "budget_exhausted"
CYCLE_DETECTED = "cycle_detected"

# cycle_window value meaning "2 * n"
AUTO_WINDOW = -1


class NoConflictError(ValueError):
    """The state is already feasible, so there is no move to make."""


@dataclass(frozen=True)
class SolverConfig:
    k: int
    max_steps: int = 1_000_000
    seed: int = 0
    record_trajectory: bool = False
    cycle_window: int = 0
    certify_cycles: bool = False
    certify_limit: int = 20_000

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.max_steps < 0:
            raise ValueError(f"max_steps must be >= 0, got {self.max_steps}")
        if self.cycle_window < AUTO_WINDOW:
            raise ValueError(f"invalid cycle_window {self.cycle_window}")

    def window_for(self, g: Graph) -> int:
        if self.cycle_window == AUTO_WINDOW:
            return max(2 * g.n, 2)
        return self.cycle_window


class TrajectoryRow(NamedTuple):
    step: int
    conflicts: int
    moved_vertex: int
    new_colour: int
    delta: int


@dataclass
class RunResult:
    status: str
    steps_taken: int
    best_conflicts: int
    best_coloring: Coloring
    initial_conflicts: int
    final_conflicts: int
    trajectory: list[TrajectoryRow] | None = None

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE

    def conflict_trajectory(self) -> list[int]:
        return [r.conflicts for r in self.trajectory or ()]


def _argmin(t: GammaTable, within: frozenset | None = None) -> tuple[int, list[tuple[int, int]]]:
    colours, gamma, k = t.colours, t.gamma, t.k
    best = None
    ties: list[tuple[int, int]] = []
    active = t.conflicting if within is None else t.conflicting & within
    for v in sorted(active):
        row = gamma[v]
        sv = colours[v]
        cur = row[sv]
        for c in range(k):
            if c == sv:
                continue
            d = row[c] - cur
            if best is None or d < best:
                best = d
                ties = [(v, c)]
            elif d == best:
                ties.append((v, c))
    if best is None:
        if not active:
            raise NoConflictError("no conflicting vertices; the colouring is feasible")
        raise ColoringError("k = 1 leaves no colour to move to")
    return best, ties


def best_moves(t: GammaTable) -> list[Move]:
    """All neighbourhood moves attaining the minimum delta, by vertex then colour."""
    best, ties = _argmin(t)
    return [Move(v, c, best) for v, c in ties]


def step(t: GammaTable, rng: random.Random) -> Move:
    """Apply one uniformly chosen argmin move, even if it increases conflicts."""
    best, ties = _argmin(t)
    v, c = ties[rng.randrange(len(ties))] if len(ties) > 1 else ties[0]
    apply_move(t, v, c)
    return Move(v, c, best)


@lru_cache(maxsize=64)
def _zobrist_keys(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    r = random.Random(0x5EED_C0DE ^ (n << 8) ^ k)
    return tuple(tuple(r.getrandbits(64) for _ in range(k)) for _ in range(n))


def fingerprint(colours: Sequence[int], k: int) -> int:
    """64-bit Zobrist hash of a colour vector; a function of the state only."""
    keys = _zobrist_keys(len(colours), k)
    h = 0
    for v, c in enumerate(colours):
        h ^= keys[v][c]
    return h


def detect_cycle(history: Sequence, window: int) -> bool:
    """True iff some fingerprint occurs twice among the last ``window`` entries."""
    if window < 2:
        raise ValueError(f"window must be >= 2, got {window}")
    recent = list(history[-window:])
    return len(set(recent)) < len(recent)


def trap_closure(t: GammaTable, limit: int = 20_000,
                 within: frozenset | None = None) -> tuple[bool | None, int]:
    """Explore every state reachable from ``t`` through argmin moves.

    Returns ``(True, size)`` when the reachable set is finite, fully explored
    and free of feasible states (the search can never succeed from here),
    ``(False, size)`` when a feasible state is reachable, and ``(None, size)``
    when more than ``limit`` states were visited. ``t`` is left untouched.

    With ``within`` (a union of connected components) only moves and
    conflicts inside that vertex set are considered.
    """
    def clean(tab):
        if within is None:
            return tab.conflict_count == 0
        return tab.conflicting.isdisjoint(within)

    if clean(t):
        return False, 1
    work = t.copy()
    encode = bytes if work.k <= 256 else tuple
    visited = {encode(work.colours)}
    _, ties = _argmin(work, within)
    stack: list[list] = [[ties, 0, None]]
    while stack:
        frame = stack[-1]
        ties, i, undo = frame
        if i == len(ties):
            stack.pop()
            if undo is not None:
                apply_move(work, *undo)
            continue
        frame[1] = i + 1
        v, c = ties[i]
        old = work.colours[v]
        apply_move(work, v, c)
        key = encode(work.colours)
        if key in visited:
            apply_move(work, v, old)
            continue
        visited.add(key)
        if clean(work):
            return False, len(visited)
        if len(visited) > limit:
            return None, len(visited)
        stack.append([_argmin(work, within)[1], 0, (v, old)])
    return True, len(visited)


def certify_trap(t: GammaTable, limit: int = 20_000,
                 components: list[frozenset] | None = None) -> bool | None:
    """Prove that the search can never reach a feasible colouring from ``t``.

    Works one connected component at a time: a component only ever moves
    when one of its own best moves is a global best move, so the states it
    can visit lie inside its component-local argmin closure. If that closure
    never frees the component of conflicts, the whole run is stuck. Returns
    ``True`` (proved), ``False`` (every conflicted component can clear
    itself) or ``None`` (some closure exceeded ``limit``).
    """
    if components is None:
        components = [frozenset(c) for c in t.graph.components()]
    active = [c for c in components if not t.conflicting.isdisjoint(c)]
    if not active:
        return False
    single = len(components) == 1
    undecided = False
    for comp in active:
        res, _ = trap_closure(t, limit, None if single else comp)
        if res:
            return True
        undecided |= res is None
    return None if undecided else False


def run(g: Graph, cfg: SolverConfig, initial: Coloring | Sequence[int] | None = None) -> RunResult:
    """Run Vertex Descent until feasible, out of budget, or caught in a cycle.

    The random initial colouring and every tie-break draw from one
    ``random.Random(cfg.seed)`` stream, so a (graph, config) pair always
    produces the same result. ``initial`` overrides the random start.
    """
    rng = random.Random(cfg.seed)
    k = cfg.k
    if initial is None:
        s = random_coloring(g, k, rng)
    elif isinstance(initial, Coloring):
        s = initial
    else:
        s = Coloring(tuple(initial), k)
    if s.k != k:
        raise ColoringError(f"initial colouring uses k={s.k}, config has k={k}")
    t = build_table(g, s)
    colours = t.colours

    best = t.conflict_count
    best_colours = tuple(colours)
    initial_conflicts = best
    trajectory: list[TrajectoryRow] | None = [] if cfg.record_trajectory else None

    window = cfg.window_for(g)
    if window:
        keys = _zobrist_keys(g.n, k)
        fp = fingerprint(colours, k)
        last_seen = {fp: 0}
        next_certify = 0
        backoff = window
        components = [frozenset(c) for c in g.components()] if cfg.certify_cycles else None

    status = FEASIBLE if best == 0 else BUDGET_EXHAUSTED
    steps = 0
    randrange = rng.randrange
    # with k = 1 the neighbourhood is empty
    while t.conflict_count > 0 and steps < cfg.max_steps and k > 1:
        delta, ties = _argmin(t)
        v, c = ties[randrange(len(ties))] if len(ties) > 1 else ties[0]
        old = colours[v]
        apply_move(t, v, c)
        steps += 1
        conflicts = t.conflict_count
        if trajectory is not None:
            trajectory.append(TrajectoryRow(steps, conflicts, v, c, delta))
        if conflicts < best:
            best = conflicts
            best_colours = tuple(colours)
            if best == 0:
                status = FEASIBLE
                break
        if window:
            fp ^= keys[v][old] ^ keys[v][c]
            prev = last_seen.get(fp)
            last_seen[fp] = steps
            if prev is not None and steps - prev < window and steps >= next_certify:
                if not cfg.certify_cycles:
                    status = CYCLE_DETECTED
                    break
                if certify_trap(t, cfg.certify_limit, components):
                    status = CYCLE_DETECTED
                    break
                next_certify = steps + backoff
                backoff *= 2
            if len(last_seen) > 4 * window:
                cutoff = steps - window
                last_seen = {h: s_ for h, s_ in last_seen.items() if s_ > cutoff}

    return RunResult(
        status=status,
        steps_taken=steps,
        best_conflicts=best,
        best_coloring=Coloring(best_colours, k),
        initial_conflicts=initial_conflicts,
        final_conflicts=t.conflict_count,
        trajectory=trajectory,
    )


TRAJECTORY_COLUMNS = ("step", "conflicts", "moved_vertex", "new_colour", "delta")


def write_trajectory_csv(result: RunResult, fh) -> None:
    if result.trajectory is None:
        raise ValueError("run was not configured with record_trajectory=True")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(TRAJECTORY_COLUMNS)
    w.writerows(result.trajectory)
