"""Command-line entry points: gen, solve, bench, volume.

Exit codes: 0 on success, 2 on an infeasible configuration (bad method /
dimension pair, malformed inputs), 1 on internal errors.
"""

from __future__ import annotations

import argparse
import csv
import glob
import sys
from pathlib import Path

from . import bench as bench_mod
from . import datagen
from .bench import METHODS, ReportRow, RunConfig, UnsupportedMethodError, run_method
from .core import (
    PcabSolution,
    read_dataset_csv,
    read_solution_json,
    solution_to_dict,
    write_dataset_csv,
)
from .models import BudgetParams


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hullbudget",
        description="Budgeted polyhedral enclosure of labeled point clouds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic instance CSV")
    gen.add_argument("--family", choices=("corners", "uniform"), default="corners")
    gen.add_argument("--dim", type=int, default=2)
    gen.add_argument("--gamma", type=float, default=None)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="dataset CSV path")
    gen.add_argument("--manifest", default=None, help="manifest JSON path")

    solve = sub.add_parser("solve", help="run one method on one instance")
    solve.add_argument("dataset", help="dataset CSV")
    solve.add_argument("--method", choices=METHODS, required=True)
    solve.add_argument("--budget", type=int, required=True)
    solve.add_argument("--time-limit", type=float, default=None)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--thr", type=int, default=None)
    solve.add_argument("--nmax", type=int, default=8)
    solve.add_argument("--root-node-only", action="store_true")
    solve.add_argument("--warm-start", action="store_true")
    solve.add_argument("--out", required=True, help="solution JSON path")
    solve.add_argument("--trace-out", default=None, help="trace CSV path")

    bench = sub.add_parser("bench", help="method x budget grid over instances")
    bench.add_argument("instances", help="dataset CSV glob")
    bench.add_argument("--method", action="append", choices=METHODS, required=True)
    bench.add_argument("--budget", action="append", type=int, required=True)
    bench.add_argument("--time-limit", type=float, default=None)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--thr", type=int, default=None)
    bench.add_argument("--nmax", type=int, default=8)
    bench.add_argument("--warm-start", action="store_true")
    bench.add_argument("--out", required=True, help="aggregate CSV path")

    volume = sub.add_parser("volume", help="Monte-Carlo volume of a solution")
    volume.add_argument("solution", help="solution JSON")
    volume.add_argument("--dim", type=int, required=True)
    volume.add_argument("--samples", type=int, default=100_000)
    volume.add_argument("--seed", type=int, default=0)
    return parser


def _cmd_gen(args) -> int:
    gamma = args.gamma
    if gamma is None:
        gamma = datagen.DEFAULT_GAMMA if args.family == "corners" else 0.0
    cfg = datagen.GenConfig(d=args.dim, gamma=gamma, seed=args.seed)
    if args.family == "corners":
        ds = datagen.generate_corner_family(cfg)
    else:
        ds = datagen.generate_uniform_family(cfg)
    write_dataset_csv(ds, args.out)
    if args.manifest:
        datagen.write_manifest(cfg, args.family, args.manifest)
    print(
        f"wrote {args.out}: {ds.num_positives} positives, "
        f"{ds.num_negatives} negatives, d={ds.dim}"
    )
    return 0


def _canonical_trace(sol: PcabSolution) -> PcabSolution:
    # event times are wall clock and would break reproducible output;
    # the file stores the event ordinal instead
    return PcabSolution(
        hyperplanes=sol.hyperplanes,
        error=sol.error,
        trace=[(float(i), e) for i, (_t, e) in enumerate(sol.trace)],
    )


def _cmd_solve(args) -> int:
    ds = read_dataset_csv(args.dataset)
    rc = RunConfig(
        method=args.method,
        K=args.budget,
        time_limit=args.time_limit,
        seed=args.seed,
        thr=args.thr,
        n_max=args.nmax,
        warm_start=args.warm_start,
        root_node_only=args.root_node_only,
    )
    sol, row = run_method(ds, BudgetParams(K=args.budget), rc)
    out = Path(args.out)
    canonical = _canonical_trace(sol)
    import json

    out.write_text(json.dumps(solution_to_dict(canonical), indent=2) + "\n")
    if args.trace_out:
        with Path(args.trace_out).open("w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["elapsed_s", "error"])
            for t, e in sol.trace:
                writer.writerow([f"{t:.3f}", e])
    err = "NA" if row.error_pct is None else f"{row.error_pct:.2f}"
    print(
        f"{args.method}: error {sol.error} ({err}%), "
        f"{len(sol.hyperplanes)} hyperplanes, {row.seconds:.2f}s"
    )
    return 0


def _cmd_bench(args) -> int:
    paths = sorted(glob.glob(args.instances))
    if not paths:
        print(f"no instances match {args.instances!r}", file=sys.stderr)
        return 2
    rows: list[ReportRow] = []
    for path in paths:
        ds = read_dataset_csv(path)
        for method in args.method:
            for budget in args.budget:
                rc = RunConfig(
                    method=method,
                    K=budget,
                    time_limit=args.time_limit,
                    seed=args.seed,
                    thr=args.thr,
                    n_max=args.nmax,
                    warm_start=args.warm_start,
                )
                _sol, row = run_method(ds, BudgetParams(K=budget), rc)
                rows.append(row)
                print(",".join(row.as_csv()))
    with Path(args.out).open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(bench_mod.REPORT_FIELDS)
        for row in rows:
            writer.writerow(row.as_csv())
    return 0


def _cmd_volume(args) -> int:
    sol = read_solution_json(args.solution)
    estimate, stderr = bench_mod.mc_volume(
        sol.hyperplanes, d=args.dim, samples=args.samples, seed=args.seed
    )
    print(f"volume {estimate:.6f} +- {stderr:.6f}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "gen": _cmd_gen,
        "solve": _cmd_solve,
        "bench": _cmd_bench,
        "volume": _cmd_volume,
    }
    try:
        return handlers[args.command](args)
    except (UnsupportedMethodError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
