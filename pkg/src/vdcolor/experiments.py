"""Seeded batch runs, scaling fits, trap statistics and plateau checks."""

from __future__ import annotations

import csv
import dataclasses
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .coloring import apply_move, build_table, random_coloring
from .descent import (AUTO_WINDOW, BUDGET_EXHAUSTED, CYCLE_DETECTED, FEASIBLE, SolverConfig,
                      _argmin, run)
from .graph import Graph
from .instances import InstanceSpec, bounded_degree_random, forest_g2, is_brooks_regular, legs_g3, path, ring

ERROR = "error"


def derive_seed(base_seed: int, trial_index: int) -> int:
    """Independent 63-bit seed for one trial of a batch."""
    ss = np.random.SeedSequence([int(base_seed) & 0xFFFFFFFFFFFFFFFF, int(trial_index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


@dataclass
class TrialRecord:
    trial_index: int
    seed: int
    status: str
    steps_taken: int
    best_conflicts: int
    wall_time: float
    reason: str = ""


RECORD_COLUMNS = [f.name for f in dataclasses.fields(TrialRecord)]


@dataclass
class BatchSummary:
    instance: str
    n: int
    m: int
    k: int
    trials: int
    success_rate: float
    failure_rate: float
    cycle_rate: float
    budget_rate: float
    error_rate: float
    steps_p50: float
    steps_p90: float
    steps_max: int

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _one_trial(args) -> TrialRecord:
    g, cfg, i, seed, initial = args
    t0 = time.perf_counter()
    try:
        r = run(g, dataclasses.replace(cfg, seed=seed), initial)
    except Exception as exc:  # recorded per trial, the batch carries on
        return TrialRecord(i, seed, ERROR, 0, -1, time.perf_counter() - t0, f"{type(exc).__name__}: {exc}")
    return TrialRecord(i, seed, r.status, r.steps_taken, r.best_conflicts, time.perf_counter() - t0)


def summarize(records: Sequence[TrialRecord], instance: str, g: Graph, k: int) -> BatchSummary:
    n = len(records)
    count = lambda s: sum(1 for r in records if r.status == s)
    steps = np.array([r.steps_taken for r in records], dtype=float)
    return BatchSummary(
        instance=instance, n=g.n, m=g.m, k=k, trials=n,
        success_rate=count(FEASIBLE) / n,
        failure_rate=1 - count(FEASIBLE) / n,
        cycle_rate=count(CYCLE_DETECTED) / n,
        budget_rate=count(BUDGET_EXHAUSTED) / n,
        error_rate=count(ERROR) / n,
        steps_p50=float(np.quantile(steps, 0.5)),
        steps_p90=float(np.quantile(steps, 0.9)),
        steps_max=int(steps.max()),
    )


def run_batch(spec: InstanceSpec | str | Graph, cfg: SolverConfig, trials: int, base_seed: int = 0,
              initial=None, workers: int = 1) -> tuple[BatchSummary, list[TrialRecord]]:
    """Run ``trials`` independent solver runs; trial ``i`` is seeded from ``(base_seed, i)``.

    ``cfg.seed`` is ignored. With ``workers > 1`` trials run in worker
    processes; records come back sorted by trial index either way.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if isinstance(spec, Graph):
        g, label = spec, f"graph:{spec.n}"
    else:
        spec = InstanceSpec.parse(spec) if isinstance(spec, str) else spec
        g, label = spec.build(), str(spec)
    jobs = [(g, cfg, i, derive_seed(base_seed, i), initial) for i in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            records = list(ex.map(_one_trial, jobs, chunksize=max(1, trials // (8 * workers))))
    else:
        records = [_one_trial(j) for j in jobs]
    records.sort(key=lambda r: r.trial_index)
    return summarize(records, label, g, cfg.k), records


def write_records_csv(records: Sequence[TrialRecord], fh, wall_time: bool = True) -> None:
    cols = RECORD_COLUMNS if wall_time else [c for c in RECORD_COLUMNS if c != "wall_time"]
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(cols)
    for r in records:
        d = dataclasses.asdict(r)
        if wall_time:
            d["wall_time"] = f"{r.wall_time:.6f}"
        w.writerow([d[c] for c in cols])


# --- scaling -----------------------------------------------------------------

SCALING_FAMILIES = ("path", "ring_even", "ring_odd", "bounded_degree")


def default_budget(n: int) -> int:
    return 50 * n ** 3


@dataclass
class ScalingRow:
    family: str
    n: int
    m: int
    k: int
    trials: int
    success_rate: float
    median_steps: float
    p90_steps: float
    max_steps: int


@dataclass
class ScalingResult:
    rows: list[ScalingRow]
    slope: float
    records: list[tuple[int, TrialRecord]] = field(repr=False, default_factory=list)

    @property
    def success_rate(self) -> float:
        return min(r.success_rate for r in self.rows)


def loglog_slope(ns: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log(y) against log(n); ``y`` is clipped below at 1."""
    if len(ns) < 2 or len(set(ns)) < 2:
        raise ValueError("slope needs at least two distinct sizes")
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.maximum(np.asarray(ys, dtype=float), 1.0))
    return float(np.polyfit(x, y, 1)[0])


def _filtered_random_graph(n: int, delta: int, seed: int) -> Graph:
    # resample until connected and neither complete nor an odd ring
    for j in range(10_000):
        g = bounded_degree_random(n, delta, derive_seed(seed, j))
        if is_brooks_regular(g):
            return g
    raise RuntimeError(f"no admissible random graph for n={n}, delta={delta}")


def scaling_graph(family: str, n: int, trial_seed: int = 0, delta: int = 3) -> Graph:
    if family == "path":
        return path(n)
    if family in ("ring_even", "ring_odd"):
        want = 0 if family == "ring_even" else 1
        if n % 2 != want:
            raise ValueError(f"{family} needs {'even' if want == 0 else 'odd'} n, got {n}")
        return ring(n)
    if family == "bounded_degree":
        return _filtered_random_graph(n, delta, trial_seed)
    raise ValueError(f"unknown scaling family {family!r}")


def scaling_experiment(family: str, sizes: Sequence[int], trials_per_size: int, k: int,
                       base_seed: int = 0, budget: Callable[[int], int] = default_budget,
                       delta: int = 3) -> ScalingResult:
    """Median and p90 steps to feasibility per size, plus the log-log slope of the medians.

    For ``bounded_degree`` every trial draws its own graph (connected, not
    complete, not an odd ring, max degree ``delta``).
    """
    sizes = list(sizes)
    if len(sizes) < 3:
        raise ValueError("scaling needs at least 3 sizes")
    if sizes != sorted(sizes) or len(set(sizes)) != len(sizes):
        raise ValueError("sizes must be strictly ascending")
    rows, all_records = [], []
    for n in sizes:
        recs = []
        ms = []
        for i in range(trials_per_size):
            seed = derive_seed(derive_seed(base_seed, n), i)
            g = scaling_graph(family, n, seed, delta)
            ms.append(g.m)
            cfg = SolverConfig(k=k, max_steps=budget(n), seed=seed)
            recs.append(_one_trial((g, cfg, i, seed, None)))
        steps = np.array([r.steps_taken for r in recs], dtype=float)
        rows.append(ScalingRow(
            family, n, int(np.median(ms)), k, len(recs),
            sum(r.status == FEASIBLE for r in recs) / len(recs),
            float(np.median(steps)), float(np.quantile(steps, 0.9)), int(steps.max()),
        ))
        all_records.extend((n, r) for r in recs)
    slope = loglog_slope([r.n for r in rows], [r.median_steps for r in rows])
    return ScalingResult(rows, slope, all_records)


# --- trap instances ----------------------------------------------------------

def g2_failure_bound(c: int) -> float:
    """Lower bound on P(no feasible 2-colouring) for ``c`` trap trees."""
    return 1 - (31 / 32) ** c


def g3_failure_bound(L: int) -> float:
    """Lower bound on P(no feasible 3-colouring) for ``L`` legs."""
    q = 239 / 243
    return (1 - q ** L) * (1 - q ** (L - 1))


def one_sided_threshold(p: float, trials: int, z: float = 3.0) -> float:
    return p - z * math.sqrt(p * (1 - p) / trials)


@dataclass
class TrapResult:
    family: str
    size: int
    n: int
    k: int
    trials: int
    budget: int
    window: int
    certified: bool
    feasible: int
    cycles: int
    budget_exhausted: int
    non_success_rate: float
    analytic_bound: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.non_success_rate >= self.threshold


def trap_experiment(family: str, size: int, trials: int, budget: int = 100_000,
                    window: int = AUTO_WINDOW, base_seed: int = 0, certify: bool = False,
                    workers: int = 1) -> tuple[TrapResult, list[TrialRecord]]:
    """Random-start failure rate on a trap family against its analytic lower bound.

    A trial fails when it ends in a detected cycle or runs out of budget.
    """
    if family == "g2":
        g, k, bound = forest_g2(size), 2, g2_failure_bound(size)
    elif family == "g3":
        g, k, bound = legs_g3(size), 3, g3_failure_bound(size)
    else:
        raise ValueError(f"trap family must be g2 or g3, got {family!r}")
    if window == 0:
        raise ValueError("trap experiments need cycle detection (window != 0)")
    cfg = SolverConfig(k=k, max_steps=budget, cycle_window=window, certify_cycles=certify)
    summary, records = run_batch(g, cfg, trials, base_seed, workers=workers)
    count = lambda s: sum(1 for r in records if r.status == s)
    res = TrapResult(
        family=family, size=size, n=g.n, k=k, trials=trials, budget=budget,
        window=cfg.window_for(g), certified=certify,
        feasible=count(FEASIBLE), cycles=count(CYCLE_DETECTED),
        budget_exhausted=count(BUDGET_EXHAUSTED),
        non_success_rate=summary.failure_rate,
        analytic_bound=bound,
        threshold=one_sided_threshold(bound, trials),
    )
    return res, records


# --- plateau bound -----------------------------------------------------------

@dataclass
class PlateauTrial:
    seed: int
    improving_steps: int
    conflicts_at_plateau: int
    bound: float
    ok: bool
    reason: str = ""
    trajectory: list[int] = field(default_factory=list, repr=False)


@dataclass
class PlateauReport:
    n: int
    m: int
    k: int
    trials: list[PlateauTrial]

    @property
    def passed(self) -> bool:
        return all(t.ok for t in self.trials)

    def counterexamples(self) -> list[PlateauTrial]:
        return [t for t in self.trials if not t.ok]


def theorem1_plateau_check(g: Graph, k: int, trials: int, base_seed: int = 0) -> PlateauReport:
    """Check the descent phase on ``g`` from ``trials`` random starts.

    While some vertex has more than ``deg(v) // k`` same-coloured neighbours,
    every step must strictly reduce the conflicts; the state where no vertex
    exceeds its share must come within ``m`` steps and hold at most
    ``sum(deg(v) // k) / 2`` conflicts.
    """
    share = [d // k for d in g.degrees]
    bound = sum(share) / 2
    out = []
    for i in range(trials):
        seed = derive_seed(base_seed, i)
        rng = random.Random(seed)
        t = build_table(g, random_coloring(g, k, rng))
        traj = [t.conflict_count]
        steps, ok, reason = 0, True, ""

        def over():
            cs, gm = t.colours, t.gamma
            return any(gm[v][cs[v]] > share[v] for v in t.conflicting)

        while over():
            if steps >= g.m:
                ok, reason = False, f"share bound not reached within m={g.m} improving steps"
                break
            delta, ties = _argmin(t)
            if delta >= 0:
                ok, reason = False, f"best move has delta {delta} while a vertex exceeds its share"
                break
            v, c = ties[rng.randrange(len(ties))]
            apply_move(t, v, c)
            steps += 1
            traj.append(t.conflict_count)
        if ok and t.conflict_count > bound:
            ok, reason = False, f"{t.conflict_count} conflicts exceed bound {bound}"
        out.append(PlateauTrial(seed, steps, t.conflict_count, bound, ok, reason,
                                traj if not ok else []))
    return PlateauReport(g.n, g.m, k, out)
