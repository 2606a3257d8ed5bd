"""Command-line harness: solve systems from files, generate test matrices,
run scaling benchmarks, and emit stability tables.

Exit codes: 0 on success, 2 for usage, parse, or dimension errors.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import bench, matrices, stability
from .scalars import KINDS, RATIONAL
from .solver import VARIANTS, EpsPolicy, RecursiveSolver, solve_batch
from .tracking import CovarianceTracker, PseudoinverseTracker

FAMILY_ALIASES = {
    "pascal": "pascal",
    "kahan": "kahan",
    "random": "random-standardized",
    "usv": "random-usv",
    "illcond": "ill-conditioned-power",
}


def _parse_eps(text):
    if text == "auto":
        return EpsPolicy.auto()
    if text == "exact":
        return EpsPolicy.exact_zero()
    try:
        return EpsPolicy.fixed(float(text))
    except ValueError as err:
        raise argparse.ArgumentTypeError(
            f"--eps expects a float, 'auto' or 'exact', got {text!r}"
        ) from err


def _common_flags():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scalar", choices=sorted(KINDS), default="f64")
    common.add_argument("--variant", choices=VARIANTS, default="general")
    common.add_argument("--eps", type=_parse_eps, default=None,
                        help="dependency threshold: float, 'auto' or 'exact'")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--csv", default=None, help="write results as CSV here")
    common.add_argument("--out", default=None, help="write the main output here")
    common.add_argument("--rcond", type=float, default=None)
    common.add_argument("--parallel", action="store_true")
    return common


def build_parser():
    common = _common_flags()
    parser = argparse.ArgumentParser(prog="rankrls", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", parents=[common],
                           help="solve a least-squares system from matrix/rhs files")
    solve.add_argument("matrix")
    solve.add_argument("rhs")
    solve.add_argument("--pinv", default=None, help="also write the pseudoinverse here")
    solve.add_argument("--cov", default=None, help="also write the solution covariance here")

    gen = sub.add_parser("gen", parents=[common], help="generate a test matrix")
    gen.add_argument("family", choices=sorted(FAMILY_ALIASES))
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, default=None)
    gen.add_argument("--r", type=int, default=None)
    gen.add_argument("--c", type=float, default=0.2)
    gen.add_argument("--power", type=int, default=4)

    bench_cmd = sub.add_parser("bench", parents=[common], help="run a scaling benchmark")
    bench_cmd.add_argument("--experiment", choices=bench.EXPERIMENTS, required=True)
    bench_cmd.add_argument("--sizes", required=True,
                           help="comma-separated swept sizes, e.g. 64,128,256")
    bench_cmd.add_argument("--reps", type=int, default=5)
    bench_cmd.add_argument("--fixed-n", type=int, default=100)
    bench_cmd.add_argument("--fixed-r", type=int, default=100)
    bench_cmd.add_argument("--fixed-m", type=int, default=2000)

    stab = sub.add_parser("stability", parents=[common], help="emit stability-table rows")
    stab.add_argument("family", choices=sorted(FAMILY_ALIASES))
    stab.add_argument("--sizes", required=True)
    stab.add_argument("--c", type=float, default=0.2)
    stab.add_argument("--variants", default=None,
                      help="comma-separated subset; default runs all three")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "bench":
            return _cmd_bench(args)
        return _cmd_stability(args)
    except (ValueError, OSError, ZeroDivisionError) as err:
        print(f"rankrls {args.command}: {err}", file=sys.stderr)
        return 2


def _cmd_solve(args):
    kind = KINDS[args.scalar]
    A = matrices.read_matrix(args.matrix, kind)
    y = matrices.read_vector(args.rhs, kind)
    if A.shape[0] != y.shape[0]:
        raise ValueError(
            f"matrix has {A.shape[0]} rows but rhs has {y.shape[0]} entries"
        )
    if args.pinv or args.cov:
        solver = RecursiveSolver(A.shape[1], variant=args.variant, eps=args.eps,
                                 scalar=kind)
        pinv_tracker = PseudoinverseTracker(solver) if args.pinv else None
        cov_tracker = CovarianceTracker(solver) if args.cov else None
        solver.ingest(A, y)
        x, rank = solver.solution, solver.rank
        if pinv_tracker is not None:
            matrices.write_matrix(args.pinv, pinv_tracker.pinv, kind)
        if cov_tracker is not None:
            matrices.write_matrix(args.cov, cov_tracker.covariance, kind)
    else:
        x, rank = solve_batch(A, y, variant=args.variant, eps=args.eps, scalar=kind)
    print(" ".join(kind.render(v) for v in x))
    print(f"rank {rank}")
    if args.out:
        matrices.write_matrix(args.out, np.reshape(x, (-1, 1)), kind)
    return 0


def _cmd_gen(args):
    family = FAMILY_ALIASES[args.family]
    spec = matrices.MatrixSpec(
        family, args.n, m=args.m, r=args.r,
        c=args.c if family == "kahan" else None,
        seed=args.seed, power=args.power,
    )
    out = matrices.generate(spec)
    # Exact integer families render as integers regardless of --scalar; the
    # text format is readable by both kinds either way.
    kind = RATIONAL if out.dtype == object else KINDS[args.scalar]
    if args.out:
        matrices.write_matrix(args.out, out, kind)
    else:
        sys.stdout.write(matrices.format_matrix(out, kind))
    return 0


def _cmd_bench(args):
    sizes = [int(s) for s in args.sizes.split(",")]
    plan = bench.make_plan(
        args.experiment, sizes,
        fixed_n=args.fixed_n, fixed_r=args.fixed_r, fixed_m=args.fixed_m,
        repetitions=args.reps, variant=args.variant,
        scalar=KINDS[args.scalar], seed=args.seed,
    )
    def progress(cell, median):
        n, m, r = cell
        print(f"{args.experiment} n={n} m={m} r={r}: median {median:.6f}s")
    samples, fit = bench.run_plan(plan, progress=progress)
    if args.csv:
        bench.write_csv(samples, args.csv)
    print(f"fit: exponent {fit.exponent:.4f} prefactor {fit.prefactor:.4e} "
          f"r_squared {fit.r_squared:.6f}")
    return 0


def _cmd_stability(args):
    family = FAMILY_ALIASES[args.family]
    sizes = [int(s) for s in args.sizes.split(",")]
    variants = VARIANTS if args.variants is None else tuple(args.variants.split(","))
    for variant in variants:
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
    rows = stability.stability_rows(
        family, sizes, variants=variants, c=args.c, rcond=args.rcond,
        seed=args.seed, parallel=args.parallel,
    )
    header = (f"{'family':22s} {'n':>5s} {'m':>5s} {'variant':11s} {'cond2':>10s} "
              f"{'e':>10s} {'res':>10s} {'exact':>6s} status")
    print(header)
    for row in rows:
        exact_col = "" if row.exact_rational is None else str(row.exact_rational).lower()
        print(f"{row.family:22s} {row.n:5d} {row.m:5d} {row.variant:11s} "
              f"{row.cond2:10.3e} {row.stability_factor:10.3e} "
              f"{row.residual_error:10.3e} {exact_col:>6s} {row.status}")
    if args.csv:
        stability.write_csv(rows, args.csv)
    return 0


if __name__ == "__main__":
    sys.exit(main())
