"""Command-line entry point: ``vdcolor <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import logging
import sys
from pathlib import Path

from .baselines import BudgetExceeded, dsatur, dsatur_enumerate, exact_chromatic
from .coloring import format_coloring
from .descent import AUTO_WINDOW, SolverConfig, run, write_trajectory_csv
from .experiments import (RECORD_COLUMNS, SCALING_FAMILIES, default_budget, run_batch, scaling_experiment,
                          trap_experiment, write_records_csv)
from .graph import read_dimacs_file, write_dimacs_file
from .instances import InstanceSpec
from .verify import run_verify

log = logging.getLogger("vdcolor")


def _window(text: str) -> int:
    if text == "auto":
        return AUTO_WINDOW
    return int(text)


def _sizes(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", newline="")


def _emit_json(obj, path: str | None = None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path:
        Path(path).write_text(text + "\n")
    else:
        print(text)


def cmd_gen(args) -> int:
    spec = InstanceSpec.parse(args.spec)
    g = spec.build()
    write_dimacs_file(g, args.output, comment=f"instance {spec}")
    log.info("wrote %s (n=%d, m=%d) to %s", spec, g.n, g.m, args.output)
    return 0


def cmd_solve(args) -> int:
    g = read_dimacs_file(args.file, strict=not args.lenient)
    cfg = SolverConfig(k=args.k, max_steps=args.budget, seed=args.seed,
                       record_trajectory=args.trajectory is not None,
                       cycle_window=_window(args.cycle_window))
    res = run(g, cfg)
    if args.trajectory:
        with _open_out(args.trajectory) as fh:
            write_trajectory_csv(res, fh)
    if args.coloring:
        Path(args.coloring).write_text(format_coloring(res.best_coloring))
    _emit_json({
        "status": res.status,
        "steps_taken": res.steps_taken,
        "initial_conflicts": res.initial_conflicts,
        "best_conflicts": res.best_conflicts,
        "k": args.k,
        "seed": args.seed,
    })
    return 0


def cmd_batch(args) -> int:
    spec = InstanceSpec.parse(args.spec)
    budget = args.budget if args.budget is not None else default_budget(spec.build().n)
    cfg = SolverConfig(k=args.k, max_steps=budget, cycle_window=_window(args.cycle_window))
    summary, records = run_batch(spec, cfg, args.trials, args.seed, workers=args.workers)
    with _open_out(args.output) as fh:
        write_records_csv(records, fh)
    _emit_json(summary.to_dict(), args.summary)
    return 0


def cmd_scaling(args) -> int:
    budget = default_budget if args.budget is None else (lambda n: args.budget)
    res = scaling_experiment(args.family, args.sizes, args.trials, args.k, args.seed,
                             budget=budget, delta=args.delta)
    with _open_out(args.output) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", *RECORD_COLUMNS])
        for n, r in res.records:
            d = dataclasses.asdict(r)
            d["wall_time"] = f"{r.wall_time:.6f}"
            w.writerow([n, *(d[c] for c in RECORD_COLUMNS)])
    _emit_json({"rows": [dataclasses.asdict(r) for r in res.rows], "slope": res.slope,
                "success_rate": res.success_rate}, args.summary)
    return 0 if res.success_rate == 1.0 else 1


def cmd_trap(args) -> int:
    res, records = trap_experiment(args.family, args.size, args.trials, args.budget,
                                   _window(args.cycle_window), args.seed,
                                   certify=args.certify, workers=args.workers)
    with _open_out(args.output) as fh:
        write_records_csv(records, fh)
    out = dataclasses.asdict(res)
    out["passed"] = res.passed
    _emit_json(out, args.summary)
    return 0


def cmd_dsatur(args) -> int:
    g = read_dimacs_file(args.file, strict=not args.lenient)
    res = dsatur(g, args.tie_break, args.seed, args.degree_rule)
    out = {"colours_used": res.colours_used}
    if args.enumerate:
        try:
            lo, hi = dsatur_enumerate(g, args.branch_limit, args.degree_rule)
        except BudgetExceeded as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        out.update(min_colours=lo, max_colours=hi)
    _emit_json(out)
    return 0


def cmd_exact(args) -> int:
    g = read_dimacs_file(args.file, strict=not args.lenient)
    try:
        chi = exact_chromatic(g, args.budget)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit_json({"chromatic": chi})
    return 0


def cmd_verify(args) -> int:
    only = set(args.only) if args.only else None
    results = run_verify(args.outdir, args.seed, only=only)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vdcolor", description="Vertex Descent graph colouring lab")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def add_lenient(sp):
        sp.add_argument("--lenient", action="store_true",
                        help="accept DIMACS files whose edge count disagrees with the header")

    sp = sub.add_parser("gen", help="write an instance as a DIMACS .col file")
    sp.add_argument("spec", help="instance spec, e.g. path:100, g2:5, g3:8, rand:200:3:seed7")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("solve", help="run Vertex Descent once on a DIMACS file")
    sp.add_argument("file")
    sp.add_argument("-k", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=1_000_000, help="maximum number of moves")
    sp.add_argument("--cycle-window", default="0", help="0 (off), 'auto' (2n) or a step count")
    sp.add_argument("--trajectory", help="CSV file for the per-step trajectory")
    sp.add_argument("--coloring", help="file for the best colouring found")
    add_lenient(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("batch", help="seeded independent trials on one instance")
    sp.add_argument("spec")
    sp.add_argument("-k", type=int, required=True)
    sp.add_argument("-t", "--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0, help="base seed")
    sp.add_argument("--budget", type=int, help="moves per trial (default 50*n^3)")
    sp.add_argument("--cycle-window", default="0")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("-o", "--output", required=True, help="per-trial CSV")
    sp.add_argument("--summary", help="JSON summary file (default: stdout)")
    sp.set_defaults(func=cmd_batch)

    sp = sub.add_parser("scaling", help="steps-to-feasibility against n, with a log-log fit")
    sp.add_argument("--family", choices=SCALING_FAMILIES, required=True)
    sp.add_argument("--sizes", type=_sizes, required=True, help="ascending, e.g. 25,50,100")
    sp.add_argument("-k", type=int, required=True)
    sp.add_argument("-t", "--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, help="moves per trial (default 50*n^3)")
    sp.add_argument("--delta", type=int, default=3, help="max degree for bounded_degree")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--summary")
    sp.set_defaults(func=cmd_scaling)

    sp = sub.add_parser("trap", help="failure rate on a trap family against its analytic bound")
    sp.add_argument("--family", choices=("g2", "g3"), required=True)
    sp.add_argument("--size", type=int, required=True, help="trees for g2, legs for g3")
    sp.add_argument("-t", "--trials", type=int, required=True)
    sp.add_argument("--budget", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--cycle-window", default="auto")
    sp.add_argument("--certify", action="store_true",
                    help="stop only on cycles proved unable to reach a feasible colouring")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--summary")
    sp.set_defaults(func=cmd_trap)

    sp = sub.add_parser("dsatur", help="colours used by DSATUR")
    sp.add_argument("file")
    sp.add_argument("--enumerate", action="store_true", help="min and max over all tie-breaks")
    sp.add_argument("--tie-break", choices=("lexicographic", "random"), default="lexicographic")
    sp.add_argument("--degree-rule", choices=("static", "uncoloured"), default="static")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--branch-limit", type=int, default=1_000_000)
    add_lenient(sp)
    sp.set_defaults(func=cmd_dsatur)

    sp = sub.add_parser("exact", help="chromatic number by backtracking")
    sp.add_argument("file")
    sp.add_argument("--budget", type=int, default=5_000_000, help="search-node budget per k")
    add_lenient(sp)
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("verify", help="run every acceptance suite")
    sp.add_argument("--outdir", default="verify_out")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--only", type=int, nargs="+", metavar="N", help="run only these criteria")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
