"""Command-line front end: ``solve``, ``bench`` and ``verify``.

Exit codes: 0 success, 1 failed checks or flagged sweep rows, 2 bad input,
3 solver failure.  All configuration comes from flags.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import bench, oracle, verify
from .dsm import IntegratorConfig, Schedule, dsm_solve, dsm_solve_vform
from .errors import InputError, SolverError
from .mmio import read_matrix_market, read_vector, write_vector
from .problems import build_problem
from .regbase import tikhonov_solve

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2, 3
MAX_VERIFY_CAP = 64


class UsageError(Exception):
    pass


def _err(msg):
    print(f"dsmlin: {msg}", file=sys.stderr)


def _float_list(text):
    items = [s for s in text.split(",") if s.strip()]
    try:
        return [float(s) for s in items]
    except ValueError:
        raise UsageError(f"not a comma-separated list of numbers: {text!r}") from None


def _config(args):
    return IntegratorConfig(h_max=args.h_max, max_steps=args.max_steps)


def _solve(args):
    A = read_matrix_market(args.matrix)
    f = read_vector(args.rhs)
    if f.size != A.n:
        raise InputError(f"rhs has {f.size} entries but the matrix is {A.n} x {A.n}")
    delta = args.delta
    if delta < 0:
        raise UsageError("--delta must be non-negative")
    explicit = args.a is not None or args.t is not None
    report = {"method": args.method, "delta": delta, "n": A.n}

    if args.method in ("dsm", "dsm-v"):
        if explicit == (args.schedule is not None):
            raise UsageError("dsm methods need either both --a and --t or --schedule")
        if explicit:
            if args.a is None or args.t is None:
                raise UsageError("--a and --t must be given together")
            a, t = args.a, args.t
        else:
            a, t = Schedule.parse(args.schedule).params(delta)
        solve = dsm_solve if args.method == "dsm" else dsm_solve_vform
        rep = solve(A, f, a, t, _config(args), delta=delta)
        x = rep.estimate
        report.update(rep.summary())
    elif args.method == "tikhonov":
        if args.t is not None:
            raise UsageError("--t does not apply to tikhonov")
        if (args.a is None) == (args.schedule is None):
            raise UsageError("tikhonov needs either --a or --schedule")
        a = args.a if args.a is not None else Schedule.parse(args.schedule).params(delta)[0]
        rep = tikhonov_solve(A, f, a)
        x = rep.estimate
        report.update(a_used=a, cg_iterations=rep.cg_iterations, cg_residual=rep.cg_residual, converged=rep.converged)
        if not rep.converged:
            _write_outputs(x, report, args.out)
            raise SolverError(f"CG did not converge: relative residual {rep.cg_residual:.3e}")
    else:
        if explicit or args.schedule is not None:
            raise UsageError("the oracle method takes no --a, --t or --schedule")
        sol = oracle.minimal_norm_solution(A, f)
        x = sol.y
        report.update(rank=sol.rank, range_residual=sol.range_residual, in_range=sol.in_range)
    _write_outputs(x, report, args.out)
    return EXIT_OK


def _write_outputs(x, report, out):
    if out is None:
        for v in x:
            print(f"{v:.17g}")
        print(json.dumps(report, sort_keys=True), file=sys.stderr)
        return
    write_vector(x, out)
    with open(f"{out}.report.json", "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _bench(args):
    deltas = _float_list(args.deltas)
    if not deltas:
        raise UsageError("empty delta list")
    if any(d < 0 or not math.isfinite(d) for d in deltas):
        raise UsageError("deltas must be finite and non-negative")
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    unknown = [m for m in methods if m not in bench.METHODS]
    if not methods or unknown:
        raise UsageError(f"methods must be drawn from {', '.join(bench.METHODS)}")
    problem = build_problem(args.generator, args.seed)
    schedule = Schedule.parse(args.schedule)
    rows = bench.run_sweep(problem, deltas, methods, schedule, _config(args), args.seed, args.jobs)
    text = bench.format_csv(rows)
    if args.csv:
        bench.write_atomic(text, args.csv)
    else:
        sys.stdout.write(text)
    bad = bench.failed(rows)
    for row in bad:
        _err(f"row delta={row['delta']!r} method={row['method']}: {row['flag']}")
    return EXIT_FAIL if bad else EXIT_OK


def _verify(args):
    if not 1 <= args.size_cap <= MAX_VERIFY_CAP:
        raise UsageError(f"--size-cap must be in [1, {MAX_VERIFY_CAP}]")
    results = verify.run_checks(args.seed, args.size_cap)
    width = max(len(name) for name, _, _ in results)
    for name, passed, detail in results:
        print(f"{'PASS' if passed else 'FAIL'}  {name:<{width}}  {detail}")
    n_bad = sum(not p for _, p, _ in results)
    print(f"{len(results) - n_bad}/{len(results)} checks passed")
    return EXIT_FAIL if n_bad else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="dsmlin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def integrator_flags(p):
        p.add_argument("--h-max", type=float, default=IntegratorConfig.h_max, help="largest RK4 step")
        p.add_argument("--max-steps", type=int, default=IntegratorConfig.max_steps)

    p = sub.add_parser("solve", help="solve one system read from files")
    p.add_argument("--matrix", required=True, help="Matrix Market file with a symmetric matrix")
    p.add_argument("--rhs", required=True, help="right-hand side (Matrix Market or one value per line)")
    p.add_argument("--method", choices=bench.METHODS, default="dsm")
    p.add_argument("--delta", type=float, default=0.0, help="declared noise level of the rhs")
    p.add_argument("--a", type=float, help="regularization shift")
    p.add_argument("--t", type=float, help="integration horizon")
    p.add_argument("--schedule", help="'default' or 'custom:a=<expr>,t=<expr>'")
    p.add_argument("--out", help="solution file; a <out>.report.json is written next to it")
    integrator_flags(p)
    p.set_defaults(func=_solve)

    p = sub.add_parser("bench", help="sweep noise levels on a generated problem and write CSV")
    p.add_argument("--generator", required=True, help="hilbert:N, spectrum:l1,l2,... or random:N")
    p.add_argument("--deltas", required=True, help="comma-separated noise levels")
    p.add_argument("--methods", default="dsm,tikhonov")
    p.add_argument("--schedule", default="default")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", help="output path (stdout if omitted)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    integrator_flags(p)
    p.set_defaults(func=_bench)

    p = sub.add_parser("verify", help="run the invariant checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size-cap", type=int, default=12)
    p.set_defaults(func=_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InputError, OSError, ValueError) as exc:
        _err(str(exc))
        return EXIT_INPUT
    except SolverError as exc:
        _err(str(exc))
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
