import io

import pytest

from vdcolor.descent import AUTO_WINDOW, SolverConfig
from vdcolor.experiments import (ERROR, RECORD_COLUMNS, derive_seed, g2_failure_bound, g3_failure_bound,
                                 loglog_slope, one_sided_threshold, run_batch, scaling_experiment,
                                 scaling_graph, theorem1_plateau_check, trap_experiment, write_records_csv)
from vdcolor.graph import from_edges
from vdcolor.instances import bounded_degree_random, complete, is_brooks_regular


def test_derive_seed_stable_and_distinct():
    assert derive_seed(0, 1) == derive_seed(0, 1)
    seeds = {derive_seed(b, i) for b in range(3) for i in range(100)}
    assert len(seeds) == 300
    assert all(0 <= s < 2 ** 63 for s in seeds)


def test_trivial_batch():
    summary, records = run_batch("path:1", SolverConfig(k=1), 10, base_seed=3)
    assert summary.success_rate == 1.0
    assert all(r.steps_taken == 0 for r in records)
    assert [r.trial_index for r in records] == list(range(10))


def test_g1_batch_always_solved():
    summary, _ = run_batch("g1", SolverConfig(k=3, max_steps=50 * 8 ** 3), 200, base_seed=1)
    assert summary.success_rate == 1.0
    assert summary.steps_p90 <= 100


def test_forest_batch_cycle_rate():
    summary, _ = run_batch("g2:10", SolverConfig(k=2, max_steps=100_000, cycle_window=AUTO_WINDOW), 1000)
    p = g2_failure_bound(10)
    assert summary.cycle_rate >= one_sided_threshold(p, 1000)
    assert summary.success_rate + summary.cycle_rate + summary.budget_rate + summary.error_rate == pytest.approx(1)


def test_batch_is_reproducible_modulo_wall_time():
    cfg = SolverConfig(k=3, max_steps=10_000)

    def text():
        _, recs = run_batch("rand:40:4:seed2", cfg, 25, base_seed=9)
        buf = io.StringIO()
        write_records_csv(recs, buf, wall_time=False)
        return buf.getvalue()

    a = text()
    assert a == text()
    assert a.splitlines()[0] == ",".join(c for c in RECORD_COLUMNS if c != "wall_time")


def test_parallel_matches_serial():
    cfg = SolverConfig(k=2, max_steps=20_000, cycle_window=AUTO_WINDOW)
    s1, r1 = run_batch("g2:3", cfg, 40, base_seed=5)
    s2, r2 = run_batch("g2:3", cfg, 40, base_seed=5, workers=2)
    strip = lambda rs: [(r.trial_index, r.seed, r.status, r.steps_taken, r.best_conflicts) for r in rs]
    assert strip(r1) == strip(r2)
    assert s1.success_rate == s2.success_rate


def test_errors_are_recorded_per_trial():
    # initial colouring with the wrong length fails inside every trial
    summary, records = run_batch("path:4", SolverConfig(k=2), 3, initial=[0, 1])
    assert summary.error_rate == 1.0
    assert all(r.status == ERROR and r.reason for r in records)


def test_batch_requires_a_trial():
    with pytest.raises(ValueError):
        run_batch("path:4", SolverConfig(k=2), 0)


def test_loglog_slope():
    ns = [10, 20, 40, 80]
    assert loglog_slope(ns, [n ** 2 for n in ns]) == pytest.approx(2)
    with pytest.raises(ValueError):
        loglog_slope([10], [5])


def test_scaling_paths():
    res = scaling_experiment("path", [16, 32, 64, 128], 20, k=2, base_seed=0)
    assert res.success_rate == 1.0
    assert res.slope <= 5
    assert [r.n for r in res.rows] == [16, 32, 64, 128]


def test_scaling_odd_rings():
    res = scaling_experiment("ring_odd", [15, 31, 63], 20, k=3)
    assert res.success_rate == 1.0
    assert res.slope <= 2


@pytest.mark.parametrize("sizes", [[16], [16, 32], [32, 16, 64], [16, 16, 32]])
def test_scaling_size_preconditions(sizes):
    with pytest.raises(ValueError):
        scaling_experiment("path", sizes, 2, k=2)


def test_scaling_graph_families():
    with pytest.raises(ValueError):
        scaling_graph("ring_even", 15)
    with pytest.raises(ValueError):
        scaling_graph("tree", 15)
    g = scaling_graph("bounded_degree", 30, trial_seed=4)
    assert is_brooks_regular(g) and g.max_degree <= 3


def test_analytic_bounds():
    assert g2_failure_bound(1) == pytest.approx(1 / 32)
    assert g2_failure_bound(10) == pytest.approx(0.27202384332787144)
    assert g3_failure_bound(50) == pytest.approx(0.3138728023742037)
    assert g3_failure_bound(10) == pytest.approx(0.021221248510348463)
    assert one_sided_threshold(0.5, 100) == pytest.approx(0.35)


def test_trap_experiment_small():
    res, records = trap_experiment("g2", 1, 400, budget=10_000)
    assert res.analytic_bound == pytest.approx(1 / 32)
    assert res.window == 28 and len(records) == 400
    assert res.passed
    assert res.feasible + res.cycles + res.budget_exhausted == 400


def test_trap_rates_grow_with_forest_size():
    rates = [trap_experiment("g2", c, 300, budget=20_000, certify=True)[0].non_success_rate
             for c in (1, 5, 10, 20)]
    # binomial noise at 300 trials is at most about 0.03 per rate
    assert all(b >= a - 0.06 for a, b in zip(rates, rates[1:]))
    assert rates[-1] > rates[0] + 0.3


def test_trap_experiment_validation():
    with pytest.raises(ValueError):
        trap_experiment("g4", 3, 10)
    with pytest.raises(ValueError):
        trap_experiment("g2", 3, 10, window=0)


def test_plateau_examples():
    # k above the maximum degree: every share is 0, so the plateau state is feasible
    g = bounded_degree_random(40, 3, 1)
    rep = theorem1_plateau_check(g, 4, 20)
    assert rep.passed and all(t.conflicts_at_plateau == 0 for t in rep.trials)
    rep = theorem1_plateau_check(complete(5), 2, 30)
    assert rep.passed and rep.trials[0].bound == 5
    for s in range(5):
        rep = theorem1_plateau_check(bounded_degree_random(50, 4, s), 2, 100, base_seed=s)
        assert rep.passed, rep.counterexamples()[:1]


def test_plateau_on_edgeless_graph():
    rep = theorem1_plateau_check(from_edges(5, []), 2, 3)
    assert rep.passed and rep.m == 0
