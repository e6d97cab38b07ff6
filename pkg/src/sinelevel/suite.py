"""Built-in benchmark suite.

Nine fixed problems covering every code path: spheres in 1/2/4
dimensions, the shifted-clipped 4D sphere at an infeasible and a feasible
level, 2D Rastrigin driven by the global loop, 2D Rosenbrock with a level
target, and one equality- and one inequality-constrained problem routed
through the deformed objective.

Every Success row is re-verified here by direct evaluation (strict
inequality, no tolerance) and cross-checked against the grid oracle; a
verification failure aborts the whole run rather than being reported as
a soft warning. Machine reports contain no wall-clock fields, so a fixed
seed reproduces them byte for byte.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .deformation import DeformationParams, constraint_penalty, gated_value
from .domain import BoxDomain, ConstrainedProblem, Point, contains
from .driver import (
    GlobalMinimizeOptions,
    GlobalResult,
    LevelSolveOptions,
    SolveReport,
    SolveStatus,
    global_minimize,
    level_solve,
)
from .oracle import OracleResult, grid_oracle
from .solver import SolverConfig

_TWO_PI = 2.0 * math.pi


def _sphere1d(x):
    return (x[0] - 1.0) ** 2


def _sphere2d(x):
    return x[0] * x[0] + x[1] * x[1]


def _sphere4d(x):
    return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]


def _shifted_sphere4d(x):
    return (
        (x[0] - 2.0) ** 2
        + (x[1] + 2.0) ** 2
        + (x[2] - 2.0) ** 2
        + (x[3] + 2.0) ** 2
    )


def _rastrigin2d(x):
    return (
        20.0
        + x[0] * x[0]
        - 10.0 * math.cos(_TWO_PI * x[0])
        + x[1] * x[1]
        - 10.0 * math.cos(_TWO_PI * x[1])
    )


def _rosenbrock2d(x):
    return (1.0 - x[0]) ** 2 + 100.0 * (x[1] - x[0] * x[0]) ** 2


def _plane(x):
    return x[0] + x[1]


def _unit_circle(x):
    return x[0] * x[0] + x[1] * x[1] - 1.0


def _corner_bowl(x):
    return (x[0] - 1.0) ** 2 + (x[1] - 1.0) ** 2


def _halfplane(x):
    return x[0] + x[1] - 1.0


@dataclass(frozen=True)
class SuiteCase:
    """One registered benchmark problem."""

    name: str
    problem: ConstrainedProblem
    kind: str  # "level" | "global"
    params: DeformationParams
    gopts: Optional[GlobalMinimizeOptions] = None
    oracle_step: float = 0.05
    oracle_level: Optional[float] = None
    expected_status: Optional[SolveStatus] = None
    annotation: str = ""


def _box(lo: float, hi: float, dim: int) -> BoxDomain:
    return BoxDomain((lo,) * dim, (hi,) * dim)


SUITE: tuple[SuiteCase, ...] = (
    SuiteCase(
        name="sphere1d",
        problem=ConstrainedProblem(_sphere1d, _box(-1.5, 1.5, 1), name="sphere1d"),
        kind="level",
        params=DeformationParams(level=0.04),
        oracle_step=1e-3,
        oracle_level=0.04,
        expected_status=SolveStatus.SUCCESS,
    ),
    SuiteCase(
        name="sphere2d",
        problem=ConstrainedProblem(_sphere2d, _box(-2.0, 2.0, 2), name="sphere2d"),
        kind="level",
        params=DeformationParams(level=0.1),
        oracle_step=0.05,
        oracle_level=0.1,
        expected_status=SolveStatus.SUCCESS,
    ),
    SuiteCase(
        name="sphere4d",
        problem=ConstrainedProblem(_sphere4d, _box(-1.5, 1.5, 4), name="sphere4d"),
        kind="level",
        params=DeformationParams(level=0.5),
        oracle_step=0.25,
        oracle_level=0.5,
        expected_status=SolveStatus.SUCCESS,
    ),
    SuiteCase(
        name="clipped-sphere4d-055",
        problem=ConstrainedProblem(
            _shifted_sphere4d, _box(-1.5, 1.5, 4), name="clipped-sphere4d-055"
        ),
        kind="level",
        params=DeformationParams(level=0.55),
        oracle_step=0.25,
        oracle_level=0.55,
        expected_status=SolveStatus.LEVEL_NOT_REACHED,
        annotation="instance infeasible on its box (objective minimum is 1.0)",
    ),
    SuiteCase(
        name="clipped-sphere4d-150",
        problem=ConstrainedProblem(
            _shifted_sphere4d, _box(-1.5, 1.5, 4), name="clipped-sphere4d-150"
        ),
        kind="level",
        params=DeformationParams(level=1.5),
        oracle_step=0.25,
        oracle_level=1.5,
        expected_status=SolveStatus.SUCCESS,
    ),
    SuiteCase(
        name="rastrigin2d",
        problem=ConstrainedProblem(
            _rastrigin2d, _box(-5.12, 5.12, 2), name="rastrigin2d"
        ),
        kind="global",
        params=DeformationParams(),
        gopts=GlobalMinimizeOptions(k_init=40.0),
        oracle_step=0.04,
    ),
    SuiteCase(
        name="rosenbrock2d",
        problem=ConstrainedProblem(
            _rosenbrock2d, _box(-2.0, 2.0, 2), name="rosenbrock2d"
        ),
        kind="level",
        params=DeformationParams(level=0.5),
        oracle_step=0.05,
        oracle_level=0.5,
        expected_status=SolveStatus.SUCCESS,
    ),
    SuiteCase(
        name="eqcon-circle",
        problem=ConstrainedProblem(
            _plane,
            _box(-2.0, 2.0, 2),
            equalities=(_unit_circle,),
            name="eqcon-circle",
        ),
        kind="level",
        # M = 5 keeps the sublevel band wide enough that the deterministic
        # first start certifies for every seed; witness penalty is reported
        params=DeformationParams(t=0.9, bigM=5.0, level=-0.02),
        oracle_step=0.05,
        expected_status=SolveStatus.SUCCESS,
        annotation="level on the deformed scale; oracle best is the least-penalty grid point",
    ),
    SuiteCase(
        name="ineqcon-halfplane",
        problem=ConstrainedProblem(
            _corner_bowl,
            _box(-2.0, 2.0, 2),
            inequalities=(_halfplane,),
            name="ineqcon-halfplane",
        ),
        kind="level",
        params=DeformationParams(t=0.9, bigM=10.0, level=0.08),
        oracle_step=0.05,
        expected_status=SolveStatus.SUCCESS,
        annotation="level on the deformed scale",
    ),
)

SUITE_NAMES: tuple[str, ...] = tuple(case.name for case in SUITE)
_BY_NAME = {case.name: case for case in SUITE}


def suite_case(name: str) -> SuiteCase:
    """Look up a registered problem by name."""
    try:
        return _BY_NAME[name]
    except KeyError:
        raise ValueError(
            f"unknown suite problem: {name}; known: {', '.join(SUITE_NAMES)}"
        ) from None


class CertificateViolation(RuntimeError):
    """A Success witness failed its independent re-check."""


@dataclass(frozen=True)
class SuiteRow:
    """One outcome row.

    ``reports`` carries every underlying level report (one for a level
    row, one per level for a global row) so callers can re-verify each
    certificate independently. ``wall_time`` and ``reports`` are excluded
    from machine reports.
    """

    name: str
    kind: str
    status: SolveStatus
    target_level: float
    best_value: Optional[float]
    witness: Optional[Point]
    witness_penalty: Optional[float]
    gate_value: Optional[float]
    attempts: int
    levels_run: int
    verified: Optional[bool]
    oracle: OracleResult
    annotation: str
    wall_time: float
    reports: tuple[SolveReport, ...] = ()


def _verify_success(case: SuiteCase, report: SolveReport) -> bool:
    """Independent strict re-check of a Success certificate."""
    witness = report.witness
    if witness is None or not contains(case.problem.domain, witness):
        return False
    value = gated_value(case.problem, report_params(case, report), report.mode, witness)
    return value < report.level


def report_params(case: SuiteCase, report: SolveReport) -> DeformationParams:
    # re-pin the level actually used (the global loop rewrites it per level)
    if case.params.level == report.level:
        return case.params
    return replace(case.params, level=report.level)


def _run_case(case: SuiteCase, seed: int) -> SuiteRow:
    opts = LevelSolveOptions(solver=SolverConfig(seed=seed))
    start = time.perf_counter()
    if case.kind == "level":
        report = level_solve(case.problem, case.params, opts)
        reports = (report,)
        status = report.status
        best_value = report.witness_value
        witness = report.witness
        witness_penalty = report.witness_penalty
        gate_value = report.gate_value
        attempts = report.attempts
        levels_run = 1
        target = case.params.level
        verified = _verify_success(case, report) if report.success else None
    else:
        result: GlobalResult = global_minimize(
            case.problem, case.params, case.gopts, opts
        )
        reports = tuple(rep for _, rep in result.levels)
        succeeded = [rep for _, rep in result.levels if rep.success]
        status = SolveStatus.SUCCESS if succeeded else SolveStatus.LEVEL_NOT_REACHED
        best_value = result.best_value
        witness = result.best_point
        witness_penalty = None
        gate_value = None
        attempts = sum(rep.attempts for _, rep in result.levels)
        levels_run = len(result.levels)
        target = case.gopts.k_init
        verified = None
        if succeeded:
            verified = all(_verify_success(case, rep) for rep in succeeded)
    wall = time.perf_counter() - start
    oracle = grid_oracle(case.problem, case.oracle_step, level=case.oracle_level)
    return SuiteRow(
        name=case.name,
        kind=case.kind,
        status=status,
        target_level=target,
        best_value=best_value,
        witness=witness,
        witness_penalty=witness_penalty,
        gate_value=gate_value,
        attempts=attempts,
        levels_run=levels_run,
        verified=verified,
        oracle=oracle,
        annotation=case.annotation,
        wall_time=wall,
        reports=reports,
    )


def run_builtin_suite(
    names: Optional[Sequence[str]] = None, seed: int = 0
) -> list[SuiteRow]:
    """Run the named problems (all of them when ``names`` is None).

    Raises ValueError for unknown names and CertificateViolation if any
    Success witness fails its strict re-check.
    """
    if names is None:
        cases = list(SUITE)
    else:
        unknown = [n for n in names if n not in _BY_NAME]
        if unknown:
            raise ValueError(
                f"unknown suite problem(s): {', '.join(unknown)}; "
                f"known: {', '.join(SUITE_NAMES)}"
            )
        cases = [_BY_NAME[n] for n in names]
    rows = [_run_case(case, seed) for case in cases]
    bad = [row.name for row in rows if row.verified is False]
    if bad:
        raise CertificateViolation(
            f"witness re-check failed for: {', '.join(bad)}"
        )
    return rows


def row_to_mapping(row: SuiteRow) -> dict:
    """Deterministic, JSON-ready form of a row (no wall time)."""
    return {
        "name": row.name,
        "kind": row.kind,
        "status": row.status.value,
        "target_level": row.target_level,
        "best_value": row.best_value,
        "witness": list(row.witness) if row.witness is not None else None,
        "witness_penalty": row.witness_penalty,
        "gate_value": row.gate_value,
        "attempts": row.attempts,
        "levels_run": row.levels_run,
        "verified": row.verified,
        "oracle_best_value": row.oracle.best_value,
        "oracle_best_point": list(row.oracle.best_point),
        "oracle_step": row.oracle.grid_step,
        "oracle_sublevel_nonempty_at": row.oracle.sublevel_nonempty_at,
        "annotation": row.annotation,
    }


def machine_report(rows: Sequence[SuiteRow], seed: int) -> dict:
    return {
        "format": "sinelevel-bench-v1",
        "seed": seed,
        "rows": [row_to_mapping(row) for row in rows],
    }


def render_machine_report(report: dict) -> str:
    """Canonical byte form: sorted keys, two-space indent, one trailing
    newline. Identical inputs produce identical bytes."""
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def format_summary_table(rows: Sequence[SuiteRow]) -> str:
    """Human-readable table for standard output (includes wall time)."""
    headers = (
        "name", "kind", "status", "target", "best_f",
        "oracle_f", "attempts", "wall_s", "note",
    )
    body = []
    for row in rows:
        body.append((
            row.name,
            row.kind,
            row.status.value,
            f"{row.target_level:g}",
            "-" if row.best_value is None else f"{row.best_value:.6g}",
            f"{row.oracle.best_value:.6g}",
            str(row.attempts),
            f"{row.wall_time:.3f}",
            row.annotation or "-",
        ))
    widths = [
        max(len(headers[i]), *(len(r[i]) for r in body)) if body else len(headers[i])
        for i in range(len(headers))
    ]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
        "  ".join("-" * widths[i] for i in range(len(headers))),
    ]
    for r in body:
        lines.append("  ".join(r[i].ljust(widths[i]) for i in range(len(headers))))
    return "\n".join(lines)
