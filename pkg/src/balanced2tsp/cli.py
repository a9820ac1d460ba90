"""Command-line interface: ``balanced2tsp <command> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .exact_dp import solve_kalmanson_exact
from .instance import generate_instance, read_instance, write_instance
from .kalmanson import is_kalmanson
from .oracle import brute_force_2tsp
from .pipeline import PRESETS, SolverConfig, run_pipeline
from .report import (
    bench_csv,
    gap_table,
    load_instances,
    per_instance_table,
    read_best_known,
    render_svg,
    run_bench,
)
from .tours import validate_sequence


def _emit(q, inst) -> int:
    problems = validate_sequence(q, inst)
    if problems:
        print("error: solution failed validation: " + "; ".join(problems), file=sys.stderr)
        return 2
    print(q.format(inst.matrix))
    return 0


def cmd_solve(args) -> int:
    inst = read_instance(args.file)
    cfg = SolverConfig(init=args.init, s=args.s, l=args.l,
                       max_iters=args.iters, time_limit=args.time_limit, seed=args.seed)
    rec = run_pipeline(inst, cfg)
    code = _emit(rec.sequence, inst)
    if code == 0 and args.svg:
        render_svg(inst, rec.sequence, args.svg)
    return code


def cmd_exact(args) -> int:
    inst = read_instance(args.file)
    return _emit(solve_kalmanson_exact(inst).sequence, inst)


def cmd_check(args) -> int:
    inst = read_instance(args.file)
    ok, w = is_kalmanson(inst.matrix, args.tol)
    if ok:
        print("KALMANSON yes")
        return 0
    i, j, l, m = w.one_based()
    print(f"KALMANSON no")
    print(f"WITNESS {i} {j} {l} {m} inequality {w.inequality} violation {w.violation:.6f}")
    return 1


def cmd_oracle(args) -> int:
    inst = read_instance(args.file)
    return _emit(brute_force_2tsp(inst).sequence, inst)


def cmd_gen(args) -> int:
    mode = "kalmanson-convex" if args.kalmanson else "uniform-square"
    inst = generate_instance(args.n, args.fixed, args.seed, mode=mode, p=args.p)
    write_instance(inst, args.output)
    return 0


def cmd_bench(args) -> int:
    best = read_best_known(args.best_known) if args.best_known else None
    instances = load_instances(args.dir)
    if not instances:
        print(f"error: no readable instances in {args.dir}", file=sys.stderr)
        return 1
    presets = args.preset or ["h53x36"]

    def progress(row):
        print(f"# {row.instance} {row.preset} {row.length:.6f} {row.seconds:.6f}", file=sys.stderr)

    rows = run_bench(instances, presets, best, init=args.init, progress=progress)
    print(gap_table(rows, presets))
    print()
    print(per_instance_table(rows, presets))
    csv_text = bench_csv(rows)
    if args.csv:
        Path(args.csv).write_text(csv_text)
    else:
        print()
        print(csv_text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="balanced2tsp",
                                 description="Balanced two-period TSP solvers.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="sliding-window heuristic from KS or random initial tours")
    p.add_argument("file")
    p.add_argument("--init", choices=("ks", "rp"), default="ks")
    p.add_argument("--s", type=int, default=5)
    p.add_argument("--l", type=int, default=3)
    p.add_argument("--iters", type=int, default=None)
    p.add_argument("--time-limit", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--svg", default=None, help="write a drawing of the tours")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("exact", help="exact DP (optimal on Kalmanson matrices)")
    p.add_argument("file")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("check-kalmanson", help="test the Kalmanson inequalities")
    p.add_argument("file")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("oracle", help="brute-force optimum for small instances")
    p.add_argument("file")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--fixed", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--kalmanson", action="store_true", help="points in convex position on a circle")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run presets over a directory of instances")
    p.add_argument("dir")
    p.add_argument("--best-known", default=None)
    p.add_argument("--preset", action="append", choices=sorted(PRESETS))
    p.add_argument("--init", choices=("ks", "rp"), default="ks")
    p.add_argument("--csv", default=None, help="write the CSV here instead of stdout")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "solve" and args.iters is None and args.time_limit is None:
        args.iters = 36
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
