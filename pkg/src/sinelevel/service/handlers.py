"""Shared front-end logic.

Both the HTTP routes and the CLI subcommands funnel through these
functions, so option resolution (file params, then explicit overrides)
and result shapes cannot drift between the two.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ..deformation import DeformationParams, constraint_penalty
from ..driver import (
    GlobalMinimizeOptions,
    GlobalResult,
    LevelSolveOptions,
    SolveReport,
    global_minimize,
    level_solve,
)
from ..expressions import ProblemSpec
from ..oracle import OracleResult, grid_oracle
from ..solver import SolverConfig
from ..suite import SuiteRow, machine_report, run_builtin_suite
from ..tracing import TraceRecord


@dataclass(frozen=True)
class SolveSettings:
    """Level-solve options as exposed by the front ends; None means
    "use the problem file's value" (or the package default)."""

    level: float
    t: Optional[float] = None
    big_k: Optional[float] = None
    big_m: Optional[float] = None
    rho: Optional[float] = None
    r_init: Optional[float] = None
    restarts: Optional[int] = None
    seed: int = 0
    record_trace: bool = False


@dataclass(frozen=True)
class GlobalSettings:
    k_init: float
    shrink: float = 0.5
    abs_step: float = 1e-4
    max_levels: int = 40
    give_up: int = 3
    seed: int = 0
    record_trace: bool = False


def resolve_solve_inputs(
    spec: ProblemSpec, settings: SolveSettings
) -> tuple[DeformationParams, LevelSolveOptions]:
    file_params = spec.params
    params = DeformationParams(
        t=settings.t if settings.t is not None else file_params.t,
        bigK=settings.big_k if settings.big_k is not None else file_params.bigK,
        bigM=settings.big_m if settings.big_m is not None else file_params.bigM,
        level=settings.level,
        anchor=settings.rho if settings.rho is not None else file_params.rho,
    )
    opts = LevelSolveOptions(
        r_init=settings.r_init if settings.r_init is not None else file_params.r_init,
        restarts=settings.restarts,
        solver=SolverConfig(seed=settings.seed),
        record_trace=settings.record_trace,
    )
    return params, opts


def run_solve(spec: ProblemSpec, settings: SolveSettings) -> SolveReport:
    params, opts = resolve_solve_inputs(spec, settings)
    return level_solve(spec.to_problem(), params, opts)


def run_global(
    spec: ProblemSpec, settings: GlobalSettings
) -> tuple[GlobalResult, tuple[TraceRecord, ...]]:
    """Run the decreasing-level loop; returns the result plus the
    concatenated per-level traces (empty unless tracing was requested)."""
    base = SolveSettings(
        level=settings.k_init, seed=settings.seed, record_trace=settings.record_trace
    )
    params, opts = resolve_solve_inputs(spec, base)
    gopts = GlobalMinimizeOptions(
        k_init=settings.k_init,
        shrink=settings.shrink,
        absolute_step=settings.abs_step,
        max_levels=settings.max_levels,
        give_up_after=settings.give_up,
    )
    result = global_minimize(spec.to_problem(), params, gopts, opts)
    traces: list[TraceRecord] = []
    for _, report in result.levels:
        if report.trace:
            traces.extend(report.trace)
    return result, tuple(traces)


def run_oracle(
    spec: ProblemSpec, step: float, level: Optional[float] = None
) -> OracleResult:
    return grid_oracle(spec.to_problem(), step, level=level)


def run_eval(
    spec: ProblemSpec, at: Sequence[float]
) -> tuple[float, Optional[float]]:
    """Objective value at a point, plus the constraint penalty for
    constrained problems (None otherwise)."""
    if len(at) != spec.dimension:
        raise ValueError(
            f"point has {len(at)} coordinate(s) but the problem dimension "
            f"is {spec.dimension}"
        )
    problem = spec.to_problem()
    point = tuple(float(v) for v in at)
    value = float(problem.objective(point))
    penalty = constraint_penalty(problem, point) if problem.is_constrained else None
    return value, penalty


def run_bench(
    only: Optional[Sequence[str]] = None, seed: int = 0
) -> tuple[list[SuiteRow], dict]:
    rows = run_builtin_suite(only, seed=seed)
    return rows, machine_report(rows, seed)


def global_status(result: GlobalResult) -> str:
    return "success" if result.best_value is not None else "level_not_reached"
