"""Command-line front end.

Subcommands: ``solve`` (one level), ``global`` (decreasing levels),
``oracle`` (grid verification), ``bench`` (built-in suite), ``eval``
(evaluate a problem's objective at a point) and ``serve`` (run the HTTP
API). Exit codes: 0 when the query succeeded or the level was reached,
2 when a level was not reached (or a queried sublevel is empty on the
grid), 1 for usage, format, or evaluation errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import __version__
from .driver import GlobalResult, SolveReport
from .errors import SineLevelError
from .expressions import ProblemSpec, read_problem_file
from .oracle import OracleResult
from .service import handlers
from .suite import CertificateViolation, format_summary_table, render_machine_report
from .tracing import save_trace


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; the documented
    convention reserves 2 for "level not reached", so remap to 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_problem_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--problem", required=True, help="path to a problem file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="sinelevel",
        description="Certified sublevel search over box domains.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="search one level: find x with f(x) < k")
    _add_problem_arg(p)
    p.add_argument("--k", type=float, required=True, help="target level")
    p.add_argument("--t", type=float, help="deformation weight in (0,1)")
    p.add_argument("--K", type=float, dest="big_k", help="objective shift")
    p.add_argument("--M", type=float, dest="big_m", help="penalty weight (> 0)")
    p.add_argument("--rho", type=float, help="frequency anchor (> 0)")
    p.add_argument("--r-init", type=float, help="first attempt's frequency")
    p.add_argument("--restarts", type=int, help="cap on total attempts")
    p.add_argument("--seed", type=int, default=0, help="seed for random restarts")
    p.add_argument("--trace", metavar="PATH", help="write per-iteration CSV trace")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("global", help="drive the level down toward the minimum")
    _add_problem_arg(p)
    p.add_argument("--k-init", type=float, required=True, help="starting level")
    p.add_argument("--shrink", type=float, default=0.5, help="geometric level factor in (0,1)")
    p.add_argument("--abs-step", type=float, default=1e-4, help="minimum level decrease")
    p.add_argument("--max-levels", type=int, default=40, help="level budget")
    p.add_argument("--give-up", type=int, default=3, help="consecutive failures allowed")
    p.add_argument("--seed", type=int, default=0, help="seed for random restarts")
    p.add_argument("--trace", metavar="PATH", help="write per-iteration CSV trace")
    p.set_defaults(func=_cmd_global)

    p = sub.add_parser("oracle", help="brute-force grid check of a problem")
    _add_problem_arg(p)
    p.add_argument("--step", type=float, required=True, help="grid spacing")
    p.add_argument("--level", type=float, help="also test sublevel nonemptiness")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("bench", help="run the built-in suite")
    p.add_argument("--only", help="comma-separated problem names (default: all)")
    p.add_argument("--seed", type=int, default=0, help="suite seed (unsigned 64-bit)")
    p.add_argument("--out", metavar="PATH", help="write the machine report (JSON)")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("eval", help="evaluate a problem's objective at a point")
    _add_problem_arg(p)
    p.add_argument("--at", required=True, help="comma-separated coordinates")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def _print_report(report: SolveReport) -> None:
    print(f"status: {report.status.value}")
    print(f"level (k): {report.level!r}")
    print(f"mode: {report.mode.value}")
    print(f"attempts: {report.attempts}")
    print(f"gate value (u): {report.gate_value!r}")
    if report.witness is not None:
        print(f"witness: {[c for c in report.witness]!r}")
        print(f"witness value: {report.witness_value!r}  (< k)")
        if report.witness_penalty is not None:
            print(f"witness penalty: {report.witness_penalty!r}")


def _write_trace(records, path: Optional[str], dimension: int) -> None:
    if path is None:
        return
    save_trace(records, path, dimension)
    print(f"trace: {path} ({len(records)} rows)")


def _load(path: str) -> ProblemSpec:
    return read_problem_file(path)


def _cmd_solve(args: argparse.Namespace) -> int:
    spec = _load(args.problem)
    settings = handlers.SolveSettings(
        level=args.k,
        t=args.t,
        big_k=args.big_k,
        big_m=args.big_m,
        rho=args.rho,
        r_init=args.r_init,
        restarts=args.restarts,
        seed=args.seed,
        record_trace=args.trace is not None,
    )
    report = handlers.run_solve(spec, settings)
    _print_report(report)
    _write_trace(report.trace or (), args.trace, spec.dimension)
    return 0 if report.success else 2


def _cmd_global(args: argparse.Namespace) -> int:
    spec = _load(args.problem)
    settings = handlers.GlobalSettings(
        k_init=args.k_init,
        shrink=args.shrink,
        abs_step=args.abs_step,
        max_levels=args.max_levels,
        give_up=args.give_up,
        seed=args.seed,
        record_trace=args.trace is not None,
    )
    result, traces = handlers.run_global(spec, settings)
    for k, report in result.levels:
        line = f"level {k!r}: {report.status.value} (attempts {report.attempts}"
        if report.witness_value is not None:
            line += f", witness value {report.witness_value!r}"
        print(line + ")")
    if result.best_value is not None:
        print(f"best value: {result.best_value!r}")
        print(f"best point: {[c for c in result.best_point]!r}")
    else:
        print("best value: none (no level was reached)")
    _write_trace(traces, args.trace, spec.dimension)
    return 0 if result.best_value is not None else 2


def _cmd_oracle(args: argparse.Namespace) -> int:
    spec = _load(args.problem)
    result: OracleResult = handlers.run_oracle(spec, args.step, args.level)
    print(f"grid step: {result.grid_step!r}")
    print(f"points evaluated: {result.points_evaluated}"
          + (f" ({result.error_points} faulted)" if result.error_points else ""))
    print(f"best point: {[c for c in result.best_point]!r}")
    print(f"best value: {result.best_value!r}")
    if result.best_is_feasible is not None:
        print(f"best point feasible: {result.best_is_feasible}"
              + ("" if result.best_is_feasible
                 else f" (least penalty {result.best_penalty!r})"))
    if args.level is None:
        return 0
    if result.sublevel_nonempty_at is not None:
        print(f"sublevel below {args.level!r}: nonempty")
        return 0
    print(f"sublevel below {args.level!r}: empty on this grid")
    return 2


def _cmd_bench(args: argparse.Namespace) -> int:
    only = None
    if args.only is not None:
        only = [name.strip() for name in args.only.split(",") if name.strip()]
    if not 0 <= args.seed < 2**64:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {args.seed}")
    rows, report = handlers.run_bench(only, args.seed)
    print(format_summary_table(rows))
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(render_machine_report(report))
        print(f"machine report: {args.out}")
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    spec = _load(args.problem)
    try:
        at = [float(part) for part in args.at.split(",")]
    except ValueError:
        raise ValueError(f"--at expects comma-separated reals, got {args.at!r}") from None
    value, penalty = handlers.run_eval(spec, at)
    print(f"value: {value!r}")
    if penalty is not None:
        print(f"penalty: {penalty!r}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CertificateViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (SineLevelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
