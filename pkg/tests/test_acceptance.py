"""Acceptance suite: every criterion at its stated tolerance, one PASS/FAIL line each.

Criteria 1 to 10 come from a full ``verify`` run with base seed 0. Criterion 11
runs ``verify`` a second time into a fresh directory and compares every CSV
with the wall_time column removed.
"""

import sys
from pathlib import Path

import pytest

from vdcolor.verify import SUITES, run_verify, strip_wall_time

BASE_SEED = 0


def _report(config, line):
    reporter = config.pluginmanager.get_plugin("terminalreporter")
    if reporter is not None:
        reporter.write_line(line)
    else:
        print(line)


@pytest.fixture(scope="session")
def verify_runs(tmp_path_factory, pytestconfig):
    first = tmp_path_factory.mktemp("verify_a")
    second = tmp_path_factory.mktemp("verify_b")
    results = {r.number: r for r in run_verify(first, BASE_SEED, echo=lambda s: _report(pytestconfig, s))}
    run_verify(second, BASE_SEED, echo=None)
    return results, first, second


def _compare_dirs(a: Path, b: Path) -> list[str]:
    names_a = sorted(p.name for p in a.glob("*.csv"))
    names_b = sorted(p.name for p in b.glob("*.csv"))
    problems = []
    if names_a != names_b:
        problems.append(f"file sets differ: {names_a} vs {names_b}")
    for name in sorted(set(names_a) & set(names_b)):
        if strip_wall_time((a / name).read_text()) != strip_wall_time((b / name).read_text()):
            problems.append(f"{name} differs")
    return problems


@pytest.mark.parametrize("number", sorted(SUITES))
def test_criterion(number, verify_runs):
    results, _, _ = verify_runs
    res = results[number]
    assert res.passed, res.line()


def test_criterion_11_determinism(verify_runs, pytestconfig):
    _, first, second = verify_runs
    problems = _compare_dirs(first, second)
    csvs = len(list(first.glob("*.csv")))
    status = "PASS" if not problems and csvs else "FAIL"
    _report(pytestconfig, f"[{status}] 11 determinism: {csvs} CSV files compared, {len(problems)} differ")
    assert csvs > 0
    assert not problems, problems


if __name__ == "__main__":
    import tempfile

    with tempfile.TemporaryDirectory() as a, tempfile.TemporaryDirectory() as b:
        ok = all(r.passed for r in run_verify(a, BASE_SEED))
        run_verify(b, BASE_SEED, echo=None)
        diff = _compare_dirs(Path(a), Path(b))
        print(f"[{'PASS' if not diff else 'FAIL'}] 11 determinism: {diff or 'identical'}")
    sys.exit(0 if ok and not diff else 1)
