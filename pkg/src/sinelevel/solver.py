"""Derivative-free local minimization (Nelder-Mead simplex).

The augmented objective is non-smooth (the gate has clip kinks) and highly
oscillatory at small frequencies, so a simplex method is used instead of
anything gradient-based. The implementation is deliberately deterministic:
simplex ordering breaks value ties by vertex insertion order, so identical
inputs reproduce bit-identical runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import AllStartsFailedError, EvaluationError

# standard simplex coefficients
_REFLECT = 1.0
_EXPAND = 2.0
_CONTRACT = 0.5
_SHRINK = 0.5


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for a single Nelder-Mead run.

    ``max_iters`` defaults to 2000 per dimension when left as None.
    ``init_step`` is the per-coordinate offset used to build the initial
    simplex; a scalar is broadcast. ``seed`` is carried for callers that
    derive random starts; the simplex iteration itself draws no randomness.
    """

    max_iters: Optional[int] = None
    x_tol: float = 1e-8
    f_tol: float = 1e-10
    init_step: Union[float, Sequence[float]] = 0.1
    seed: int = 0
    record_trace: bool = False

    def __post_init__(self):
        if self.max_iters is not None and self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.x_tol > 0.0:
            raise ValueError(f"x_tol must be positive, got {self.x_tol}")
        if not self.f_tol > 0.0:
            raise ValueError(f"f_tol must be positive, got {self.f_tol}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")

    def steps_for(self, dimension: int) -> np.ndarray:
        if np.isscalar(self.init_step):
            steps = np.full(dimension, float(self.init_step))
        else:
            steps = np.asarray(self.init_step, dtype=float)
            if steps.shape != (dimension,):
                raise ValueError(
                    f"init_step has shape {steps.shape}, expected ({dimension},)"
                )
        if not np.all(steps > 0.0):
            raise ValueError("init_step entries must be positive")
        return steps

    def iteration_cap(self, dimension: int) -> int:
        return self.max_iters if self.max_iters is not None else 2000 * dimension


@dataclass(frozen=True)
class LocalResult:
    """Outcome of one local minimization.

    ``x`` is the raw search vector; callers that encode structured
    variables (spatial point plus log-frequencies) decode it themselves.
    ``trace``, when recorded, holds one (iteration, best value, best x)
    entry per iteration with a non-increasing value sequence.
    """

    x: np.ndarray
    value: float
    iters: int
    converged: bool
    trace: Optional[tuple] = None
    start_index: Optional[int] = None


def _checked(objective: Callable[[np.ndarray], float], x: np.ndarray) -> float:
    value = float(objective(x))
    if math.isnan(value):
        raise EvaluationError(f"objective returned NaN at {x.tolist()}", point=tuple(x))
    return value


def nelder_mead_minimize(
    objective: Callable[[np.ndarray], float],
    init: Sequence[float],
    config: SolverConfig = SolverConfig(),
) -> LocalResult:
    """Minimize ``objective`` from ``init`` with a Nelder-Mead simplex.

    Converges when both the L-inf simplex diameter drops below ``x_tol``
    and the value spread drops below ``f_tol``. The returned value never
    exceeds objective(init). +inf objective values are legal (treated as
    worse than everything, which lets callers erect soft barriers); NaN
    aborts with a diagnostic.
    """
    x0 = np.asarray(init, dtype=float)
    if x0.ndim != 1 or x0.size < 1:
        raise ValueError("init must be a non-empty 1-d vector")
    if not np.all(np.isfinite(x0)):
        raise ValueError(f"init must be finite, got {x0.tolist()}")
    n = x0.size
    steps = config.steps_for(n)
    cap = config.iteration_cap(n)

    f0 = _checked(objective, x0)
    if not math.isfinite(f0):
        raise EvaluationError(
            f"objective is non-finite at the initial point {x0.tolist()}",
            point=tuple(x0),
        )

    # vertices: (value, insertion index, x); ties in value resolve by age
    counter = 0
    simplex = [(f0, counter, x0.copy())]
    for i in range(n):
        counter += 1
        xi = x0.copy()
        xi[i] += steps[i]
        simplex.append((_checked(objective, xi), counter, xi))
    simplex.sort(key=lambda v: (v[0], v[1]))

    trace = [] if config.record_trace else None
    iters = 0
    converged = False
    while iters < cap:
        iters += 1
        best_f, _, best_x = simplex[0]
        worst_f = simplex[-1][0]
        if trace is not None:
            trace.append((iters, best_f, best_x.copy()))

        x_spread = max(
            float(np.max(np.abs(v[2] - best_x))) for v in simplex[1:]
        )
        finite_worst = worst_f if math.isfinite(worst_f) else math.inf
        if x_spread <= config.x_tol and finite_worst - best_f <= config.f_tol:
            converged = True
            break

        centroid = np.mean([v[2] for v in simplex[:-1]], axis=0)
        worst = simplex[-1]
        xr = centroid + _REFLECT * (centroid - worst[2])
        fr = _checked(objective, xr)

        if fr < simplex[0][0]:
            xe = centroid + _REFLECT * _EXPAND * (centroid - worst[2])
            fe = _checked(objective, xe)
            counter += 1
            if fe < fr:
                simplex[-1] = (fe, counter, xe)
            else:
                simplex[-1] = (fr, counter, xr)
        elif fr < simplex[-2][0]:
            counter += 1
            simplex[-1] = (fr, counter, xr)
        else:
            if fr < worst[0]:
                xc = centroid + _CONTRACT * _REFLECT * (centroid - worst[2])
                fc = _checked(objective, xc)
                accept = fc <= fr
            else:
                xc = centroid - _CONTRACT * (centroid - worst[2])
                fc = _checked(objective, xc)
                accept = fc < worst[0]
            if accept:
                counter += 1
                simplex[-1] = (fc, counter, xc)
            else:
                anchor_x = simplex[0][2]
                shrunk = [simplex[0]]
                for _, _, xv in simplex[1:]:
                    counter += 1
                    xs = anchor_x + _SHRINK * (xv - anchor_x)
                    shrunk.append((_checked(objective, xs), counter, xs))
                simplex = shrunk
        simplex.sort(key=lambda v: (v[0], v[1]))

    best_f, _, best_x = simplex[0]
    return LocalResult(
        x=best_x,
        value=best_f,
        iters=iters,
        converged=converged,
        trace=tuple(trace) if trace is not None else None,
    )


def multistart_minimize(
    objective: Callable[[np.ndarray], float],
    starts: Sequence[Sequence[float]],
    config: SolverConfig = SolverConfig(),
) -> LocalResult:
    """Run Nelder-Mead from every start and keep the least result.

    A start that fails to evaluate is recorded and skipped; if every start
    fails, the error names them all. Ties between starts resolve by start
    index, so the outcome is deterministic for a fixed start list.
    """
    if len(starts) == 0:
        raise ValueError("multistart needs at least one start")
    best: Optional[LocalResult] = None
    failures: list[tuple[int, str]] = []
    for idx, start in enumerate(starts):
        try:
            result = nelder_mead_minimize(objective, start, config)
        except (EvaluationError, ValueError) as exc:
            failures.append((idx, str(exc)))
            continue
        if best is None or result.value < best.value:
            best = LocalResult(
                x=result.x,
                value=result.value,
                iters=result.iters,
                converged=result.converged,
                trace=result.trace,
                start_index=idx,
            )
    if best is None:
        raise AllStartsFailedError(failures)
    return best
