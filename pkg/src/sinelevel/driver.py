"""Top-level search procedures.

``level_solve`` answers "is there a point with gated objective below k?"
by minimizing the augmented objective w = u + v over (x, r) from a fixed
first start (the box's lower corner with a small frequency) and then a
restart schedule. Any evaluation with u < 0 is a self-certifying success:
the transformed point is a witness with objective strictly below the
level, and it is re-verified by direct evaluation before being reported.

``global_minimize`` drives level_solve with a decreasing sequence of
levels, ratcheting a certified upper bound toward the global minimum.
``cross_section_solve`` is the one-dimensional variant that pins x at an
anchor point and searches over the shared frequency only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .deformation import (
    DeformationParams,
    GateMode,
    constraint_penalty,
    gated_value,
    make_gate_function,
)
from .domain import (
    AugmentedPoint,
    BoxDomain,
    ConstrainedProblem,
    FrequencyVector,
    Point,
    contains,
    midpoint,
)
from .reparam import R_MIN_DEFAULT, anchor_term, pulled_back_gate, transform_point
from .solver import LocalResult, SolverConfig, nelder_mead_minimize
from .tracing import TraceRecord


class SolveStatus(enum.Enum):
    SUCCESS = "success"
    LEVEL_NOT_REACHED = "level_not_reached"


class XStartPolicy(enum.Enum):
    """Where restart attempts place their initial spatial point."""

    BOX_LOWER_CORNER = "lower_corner"
    MIDPOINT = "midpoint"
    SEEDED_RANDOM = "seeded_random"


_DEFAULT_R_SCHEDULE = (0.3, 0.2, 0.15, 0.1, 0.075, 0.05)
_DEFAULT_POLICIES = (
    XStartPolicy.BOX_LOWER_CORNER,
    XStartPolicy.MIDPOINT,
    XStartPolicy.SEEDED_RANDOM,
)


@dataclass(frozen=True)
class LevelSolveOptions:
    """Restart policy and local-solver settings for one level.

    The first attempt always starts at (lower corner, r_init). After that,
    each frequency in ``restart_r_schedule`` is crossed with the x-start
    policies; the SEEDED_RANDOM policy contributes ``random_starts``
    in-box points drawn deterministically from the solver seed.
    ``restarts``, when set, caps the total number of attempts.
    """

    r_init: float = 0.3
    restarts: Optional[int] = None
    restart_r_schedule: tuple[float, ...] = _DEFAULT_R_SCHEDULE
    restart_x_policies: tuple[XStartPolicy, ...] = _DEFAULT_POLICIES
    random_starts: int = 3
    tied: bool = True
    anchor_center: Optional[Point] = None
    r_min: float = R_MIN_DEFAULT
    solver: SolverConfig = field(default_factory=SolverConfig)
    record_trace: bool = False

    def __post_init__(self):
        if self.r_init < self.r_min:
            raise ValueError(f"r_init {self.r_init} is below the floor {self.r_min}")
        for r in self.restart_r_schedule:
            if r < self.r_min:
                raise ValueError(f"schedule entry {r} is below the floor {self.r_min}")
        if self.restarts is not None and self.restarts < 1:
            raise ValueError("restarts must be a positive count")
        if self.random_starts < 0:
            raise ValueError("random_starts must be >= 0")


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one level search.

    On success, ``witness`` is the transformed point whose gated objective
    value (``witness_value``) is strictly below ``level``; ``gate_value``
    is the certifying u < 0. On failure, ``gate_value`` carries the least
    u seen anywhere (0.0 means the gate never opened), and
    ``raw_minimizer`` is the best point looked at.
    """

    status: SolveStatus
    level: float
    mode: GateMode
    raw_minimizer: AugmentedPoint
    gate_value: float
    attempts: int
    witness: Optional[Point] = None
    witness_value: Optional[float] = None
    witness_penalty: Optional[float] = None
    trace: Optional[tuple[TraceRecord, ...]] = None
    trace_path: Optional[str] = None

    @property
    def success(self) -> bool:
        return self.status is SolveStatus.SUCCESS


@dataclass(frozen=True)
class GlobalMinimizeOptions:
    """Decreasing-level schedule: after a success with witness value f*,
    the next level is f* - max(absolute_step, (1 - shrink)*|f*|)."""

    k_init: float
    shrink: float = 0.5
    absolute_step: float = 1e-4
    max_levels: int = 40
    give_up_after: int = 3

    def __post_init__(self):
        if not 0.0 < self.shrink < 1.0:
            raise ValueError(f"shrink must lie in (0, 1), got {self.shrink}")
        if not self.absolute_step > 0.0:
            raise ValueError("absolute_step must be positive")
        if self.max_levels < 1 or self.give_up_after < 1:
            raise ValueError("max_levels and give_up_after must be >= 1")
        if not math.isfinite(self.k_init):
            raise ValueError("k_init must be finite")


@dataclass(frozen=True)
class GlobalResult:
    """Level-by-level history plus the best certified point found."""

    levels: tuple[tuple[float, SolveReport], ...]
    best_point: Optional[Point]
    best_value: Optional[float]


class _GateMonitor:
    """Tracks the best (least-u, then least-w) evaluation seen so far.

    Because u < 0 anywhere is a valid certificate, the driver watches
    every augmented-objective evaluation instead of trusting only the
    converged minimizer of each local run.
    """

    def __init__(self):
        self.best_u = math.inf
        self.best_w = math.inf
        self.best_x: Optional[Point] = None
        self.best_r: Optional[FrequencyVector] = None

    def observe(self, u: float, v: float, x: Point, r: FrequencyVector) -> None:
        w = u + v
        if u < self.best_u or (u == self.best_u and w < self.best_w):
            self.best_u = u
            self.best_w = w
            self.best_x = x
            self.best_r = r


def _resolve_mode(problem: ConstrainedProblem, mode: Optional[GateMode]) -> GateMode:
    if mode is not None:
        return mode
    return GateMode.DEFORMED_OBJECTIVE if problem.is_constrained else GateMode.RAW_OBJECTIVE


def _make_augmented(problem, params, opts, mode, monitor):
    """Wrap w = u + v as a flat-vector objective over (x, log r)."""
    box = problem.domain
    p = box.dimension
    gate = make_gate_function(problem, params, mode)
    center = opts.anchor_center if opts.anchor_center is not None else midpoint(box)
    rho = params.anchor
    tied = opts.tied
    r_min = opts.r_min

    def objective(z: np.ndarray) -> float:
        if not np.all(np.isfinite(z)):
            return math.inf
        rvals = np.exp(z[p:])
        if not np.all(np.isfinite(rvals)) or np.any(rvals < r_min):
            return math.inf
        x = Point(z[:p].tolist())
        if tied:
            r = FrequencyVector.tied_value(float(rvals[0]), p)
        else:
            r = FrequencyVector(rvals.tolist())
        u = pulled_back_gate(gate, x, r, box, r_min=r_min)
        v = anchor_term(x, r, box, rho=rho, center=center)
        monitor.observe(u, v, x, r)
        return u + v

    return objective, gate, center


def _encode_start(x_coords: Sequence[float], r0: float, p: int, tied: bool) -> np.ndarray:
    logr = [math.log(r0)] if tied else [math.log(r0)] * p
    return np.array(list(x_coords) + logr, dtype=float)


def _decode(z: np.ndarray, p: int, tied: bool) -> AugmentedPoint:
    x = Point(z[:p].tolist())
    rvals = np.exp(z[p:])
    if tied:
        r = FrequencyVector.tied_value(float(rvals[0]), p)
    else:
        r = FrequencyVector(rvals.tolist())
    return AugmentedPoint(x, r)


def _attempt_starts(box: BoxDomain, opts: LevelSolveOptions, rng: np.random.Generator):
    """The deterministic (x, r) start list: lower corner at r_init first,
    then the restart schedule crossed with the x policies."""
    lo = np.asarray(box.lower)
    hi = np.asarray(box.upper)
    c = midpoint(box)
    starts: list[tuple[tuple[float, ...], float]] = [(box.lower, opts.r_init)]
    for r in opts.restart_r_schedule:
        for policy in opts.restart_x_policies:
            if policy is XStartPolicy.BOX_LOWER_CORNER:
                starts.append((box.lower, r))
            elif policy is XStartPolicy.MIDPOINT:
                starts.append((c.coords, r))
            else:
                for _ in range(opts.random_starts):
                    draw = rng.uniform(lo, hi)
                    starts.append((tuple(float(v) for v in draw), r))
    if opts.restarts is not None:
        starts = starts[: opts.restarts]
    return starts


def _solver_config(opts: LevelSolveOptions, box: BoxDomain, n_vars: int) -> SolverConfig:
    cfg = opts.solver
    if np.isscalar(cfg.init_step) and float(cfg.init_step) == 0.1:
        # driver default: 10% of each box width in x, 0.25 in log r
        steps = [0.1 * w for w in box.widths()]
        steps += [0.25] * (n_vars - box.dimension)
        cfg = replace(cfg, init_step=tuple(steps))
    if opts.record_trace and not cfg.record_trace:
        cfg = replace(cfg, record_trace=True)
    return cfg


def _assemble_trace(
    local: LocalResult,
    attempt: int,
    level: float,
    problem: ConstrainedProblem,
    params: DeformationParams,
    mode: GateMode,
    gate,
    opts: LevelSolveOptions,
    center: Point,
    best_f_so_far: float,
) -> tuple[list[TraceRecord], float]:
    box = problem.domain
    p = box.dimension
    records = []
    best_f = best_f_so_far
    for it, w_val, z in local.trace or ():
        ap = _decode(z, p, opts.tied)
        u = pulled_back_gate(gate, ap.x, ap.r, box, r_min=opts.r_min)
        v = anchor_term(ap.x, ap.r, box, rho=params.anchor, center=center)
        y = transform_point(ap.x, ap.r, box, r_min=opts.r_min)
        best_f = min(best_f, gated_value(problem, params, mode, y))
        records.append(
            TraceRecord(
                level=level,
                attempt=attempt,
                iter=it,
                w=w_val,
                u=u,
                v=v,
                best_f=best_f,
                x=ap.x,
                r=ap.r,
            )
        )
    return records, best_f


def _report_from_monitor(
    monitor: _GateMonitor,
    problem: ConstrainedProblem,
    params: DeformationParams,
    mode: GateMode,
    opts: LevelSolveOptions,
    attempts: int,
    trace: Optional[tuple[TraceRecord, ...]],
) -> SolveReport:
    box = problem.domain
    raw = AugmentedPoint(monitor.best_x, monitor.best_r)
    if monitor.best_u < 0.0:
        witness = transform_point(raw.x, raw.r, box, r_min=opts.r_min)
        value = gated_value(problem, params, mode, witness)
        penalty = constraint_penalty(problem, witness) if problem.is_constrained else None
        return SolveReport(
            status=SolveStatus.SUCCESS,
            level=params.level,
            mode=mode,
            raw_minimizer=raw,
            gate_value=monitor.best_u,
            attempts=attempts,
            witness=witness,
            witness_value=value,
            witness_penalty=penalty,
            trace=trace,
        )
    return SolveReport(
        status=SolveStatus.LEVEL_NOT_REACHED,
        level=params.level,
        mode=mode,
        raw_minimizer=raw,
        gate_value=monitor.best_u,
        attempts=attempts,
        trace=trace,
    )


def level_solve(
    problem: ConstrainedProblem,
    params: DeformationParams,
    opts: LevelSolveOptions = LevelSolveOptions(),
    mode: Optional[GateMode] = None,
    seed_salt: int = 0,
) -> SolveReport:
    """Search for a point whose gated objective is strictly below the level.

    Runs local minimizations of w = u + v from the start schedule, stopping
    at the first attempt that produced any evaluation with u < 0. The
    returned witness is the transformed point of that evaluation,
    re-evaluated directly; failure reports carry the least u found.
    """
    mode = _resolve_mode(problem, mode)
    box = problem.domain
    p = box.dimension
    n_vars = p + 1 if opts.tied else 2 * p
    monitor = _GateMonitor()
    objective, gate, center = _make_augmented(problem, params, opts, mode, monitor)
    rng = np.random.default_rng(np.random.SeedSequence((int(opts.solver.seed), int(seed_salt))))
    starts = _attempt_starts(box, opts, rng)
    cfg = _solver_config(opts, box, n_vars)

    trace_records: list[TraceRecord] = []
    best_f = math.inf
    attempts = 0
    for attempt_idx, (x0, r0) in enumerate(starts):
        attempts += 1
        local = nelder_mead_minimize(objective, _encode_start(x0, r0, p, opts.tied), cfg)
        if opts.record_trace:
            recs, best_f = _assemble_trace(
                local, attempt_idx, params.level, problem, params, mode, gate,
                opts, center, best_f,
            )
            trace_records.extend(recs)
        if monitor.best_u < 0.0:
            break

    trace = tuple(trace_records) if opts.record_trace else None
    return _report_from_monitor(monitor, problem, params, mode, opts, attempts, trace)


def cross_section_solve(
    problem: ConstrainedProblem,
    params: DeformationParams,
    anchor_x: Optional[Point] = None,
    r_grid_then_local: bool = True,
    opts: LevelSolveOptions = LevelSolveOptions(),
    mode: Optional[GateMode] = None,
    grid_points: int = 512,
    r_max: float = 10.0,
) -> SolveReport:
    """Pin x at ``anchor_x`` and search the shared frequency only.

    Scans r over a log-spaced grid on [r_min, r_max]; when
    ``r_grid_then_local`` is set, the best grid cells are polished with a
    one-variable local run. Success is judged exactly as in level_solve:
    any evaluation with u < 0 certifies. Note that anchoring at the
    origin degenerates the scan: sin(0) = 0 for every frequency, so the
    transformed point stays pinned at the box midpoint and only levels
    the midpoint itself satisfies can certify.
    """
    mode = _resolve_mode(problem, mode)
    box = problem.domain
    p = box.dimension
    x = anchor_x if anchor_x is not None else midpoint(box)
    if not contains(box, x):
        raise ValueError(f"anchor point {tuple(x)} is outside the box")
    monitor = _GateMonitor()
    gate = make_gate_function(problem, params, mode)
    center = opts.anchor_center if opts.anchor_center is not None else midpoint(box)

    def w_of_r(r: float) -> float:
        rv = FrequencyVector.tied_value(r, p)
        u = pulled_back_gate(gate, x, rv, box, r_min=opts.r_min)
        v = anchor_term(x, rv, box, rho=params.anchor, center=center)
        monitor.observe(u, v, x, rv)
        return u + v

    grid = np.exp(np.linspace(math.log(opts.r_min), math.log(r_max), grid_points))
    values = [w_of_r(float(r)) for r in grid]
    best_w_r = float(grid[int(np.argmin(values))])

    if r_grid_then_local:
        refine_from = {best_w_r}
        if monitor.best_r is not None:
            refine_from.add(monitor.best_r[0])
        cfg = replace(opts.solver, init_step=0.1)

        def objective(z: np.ndarray) -> float:
            r = math.exp(float(z[0]))
            if not math.isfinite(r) or r < opts.r_min:
                return math.inf
            return w_of_r(r)

        for r0 in sorted(refine_from):
            nelder_mead_minimize(objective, [math.log(r0)], cfg)

    return _report_from_monitor(monitor, problem, params, mode, opts, 1, None)


def global_minimize(
    problem: ConstrainedProblem,
    params: DeformationParams,
    gopts: GlobalMinimizeOptions,
    opts: LevelSolveOptions = LevelSolveOptions(),
    mode: Optional[GateMode] = None,
) -> GlobalResult:
    """Drive level_solve with decreasing levels until progress stalls.

    Each success tightens the level below the witness value; each failure
    burns one unit of patience (the level is retried with fresh restart
    randomness). Stops after ``max_levels`` levels or ``give_up_after``
    consecutive failures.
    """
    mode = _resolve_mode(problem, mode)
    k = gopts.k_init
    history: list[tuple[float, SolveReport]] = []
    best_point: Optional[Point] = None
    best_value: Optional[float] = None
    consecutive_failures = 0
    for level_idx in range(gopts.max_levels):
        level_params = replace(params, level=k)
        report = level_solve(problem, level_params, opts, mode=mode, seed_salt=level_idx)
        history.append((k, report))
        if report.success:
            consecutive_failures = 0
            f_star = report.witness_value
            if best_value is None or f_star < best_value:
                best_value = f_star
                best_point = report.witness
            k = f_star - max(gopts.absolute_step, (1.0 - gopts.shrink) * abs(f_star))
        else:
            consecutive_failures += 1
            if consecutive_failures >= gopts.give_up_after:
                break
    return GlobalResult(
        levels=tuple(history), best_point=best_point, best_value=best_value
    )
