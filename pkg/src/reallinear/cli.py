"""Command-line benchmark: ``reallinear-bench --scale desk --out metrics.csv``."""

import argparse
import logging
import sys

from . import bench

VALIDATE_RTOL = 1e-4


def _csv_list(valid):
    def parse(text):
        items = [s.strip() for s in text.split(",") if s.strip()]
        bad = [s for s in items if s not in valid]
        if bad or not items:
            raise argparse.ArgumentTypeError(
                f"expected a comma-separated subset of {','.join(valid)}, got {text!r}")
        return items
    return parse


def _dims(text):
    try:
        dims = tuple(int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--dims expects N,M1,M2,P integers, got {text!r}")
    if len(dims) != 4 or min(dims) <= 0:
        raise argparse.ArgumentTypeError(f"--dims expects four positive integers, got {text!r}")
    return dims


def _nonneg_int(text):
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return n


def _pos_int(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser():
    p = argparse.ArgumentParser(
        prog="reallinear-bench",
        description="Compare real-lifted and complex-native least-squares solvers "
                    "with matrix and function-call operators.")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", choices=("paper", "desk", "custom"), default="desk")
    p.add_argument("--dims", type=_dims, help="N,M1,M2,P (required with --scale custom)")
    p.add_argument("--lambda", dest="lam", type=float, default=bench.DEFAULT_LAMBDA)
    p.add_argument("--solvers", type=_csv_list(bench.SOLVER_NAMES),
                   default=list(bench.SOLVER_NAMES))
    p.add_argument("--approaches", type=_csv_list(bench.APPROACHES),
                   default=list(bench.APPROACHES))
    p.add_argument("--iters-landweber", type=_nonneg_int, default=50)
    p.add_argument("--iters-krylov", type=_nonneg_int, default=15)
    p.add_argument("--timing-repeats", type=_pos_int, default=3)
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--validate", action="store_true",
                   help="compare CG/LSQR solutions with a dense solve")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")

    if args.scale == "custom":
        if args.dims is None:
            parser.error("--scale custom requires --dims N,M1,M2,P")
        dims = args.dims
    elif args.dims is not None:
        parser.error("--dims is only valid with --scale custom")
    else:
        dims = bench.PAPER_DIMS if args.scale == "paper" else bench.DESK_DIMS

    try:
        problem = bench.generate_problem(args.seed, *dims, lam=args.lam)
        iters = {"landweber": args.iters_landweber, "cg": args.iters_krylov,
                 "lsqr": args.iters_krylov}
        rows, traces = bench.run_benchmark_traces(
            problem, args.solvers, args.approaches, iters, args.timing_repeats)
        if args.out:
            bench.write_metrics(rows, args.out)
        _summary(rows)
        if args.validate:
            return _validate(problem, traces, args.approaches)
    except (ValueError, OSError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def _summary(rows):
    last = {}
    for r in rows:
        last[r.approach, r.solver] = r
    print(f"{'approach':<16} {'solver':<10} {'iters':>5} {'real mults':>16} "
          f"{'cost':>14} {'seconds':>10} {'rel diff':>10}")
    for (approach, solver), r in sorted(last.items()):
        print(f"{approach:<16} {solver:<10} {r.iteration:>5} {r.cum_real_mults:>16} "
              f"{r.cost:>14.6e} {r.elapsed_seconds:>10.4f} {r.rel_diff:>10.2e}")


def _validate(problem, traces, approaches):
    devs = bench.validate_against_oracle(problem, traces)
    worst = 0.0
    for (approach, solver), dev in sorted(devs.items()):
        if approach not in approaches:
            continue
        gated = solver != "landweber"
        print(f"oracle deviation {approach}/{solver}: {dev:.3e}" + ("" if gated else " (not gated)"))
        if gated:
            worst = max(worst, dev)
    print(f"max deviation from oracle: {worst:.3e} (threshold {VALIDATE_RTOL:g})")
    if worst > VALIDATE_RTOL:
        print("error: validation failed", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
