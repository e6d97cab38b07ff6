"""Scalar building blocks of the search objective.

The pieces assembled here turn an arbitrary problem into a nonpositive
"gate" function: the gate is strictly negative exactly where the target
inequality holds, and zero everywhere else. Downstream search only ever
asks for the sign of the gate, which makes any negative value a
self-certifying success.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from .domain import ConstrainedProblem, Point
from .errors import EvaluationError


class GateMode(enum.Enum):
    """Which scale the level threshold lives on.

    RAW_OBJECTIVE gates f(x) itself against the level. DEFORMED_OBJECTIVE
    first folds constraint violations into the value (see
    :func:`deformed_objective`) and gates that, which is the route for
    constrained problems.
    """

    RAW_OBJECTIVE = "raw"
    DEFORMED_OBJECTIVE = "deformed"


@dataclass(frozen=True)
class DeformationParams:
    """Parameters of the constraint fold and the level threshold.

    t in (0,1) balances objective against penalty (t near 1 weights the
    penalty), bigK shifts the objective, bigM scales the penalty, level is
    the threshold the gate compares against, and anchor is the target
    frequency of the convex anchor term (any positive number works; 2 is
    the conventional default).
    """

    t: float = 0.99
    bigK: float = 0.0
    bigM: float = 1e3
    level: float = 0.0
    anchor: float = 2.0

    def __post_init__(self):
        if not 0.0 < self.t < 1.0:
            raise ValueError(f"t must lie in (0, 1), got {self.t}")
        if not self.bigM > 0.0:
            raise ValueError(f"bigM must be positive, got {self.bigM}")
        if not self.anchor > 0.0:
            raise ValueError(f"anchor must be positive, got {self.anchor}")
        if not math.isfinite(self.level):
            raise ValueError(f"level must be finite, got {self.level}")


def _checked_eval(func: Callable[[Point], float], x: Point, what: str) -> float:
    try:
        value = float(func(x))
    except EvaluationError:
        raise
    except Exception as exc:
        raise EvaluationError(f"{what} raised {exc!r}", point=x) from exc
    if not math.isfinite(value):
        raise EvaluationError(f"{what} returned non-finite value {value}", point=x)
    return value


def constraint_penalty(problem: ConstrainedProblem, x: Point) -> float:
    """Sum of |g_i(x)| plus (h_j(x) + |h_j(x)|) over all constraints.

    Nonnegative everywhere, and exactly zero iff x is feasible: each |g_i|
    vanishes only at g_i = 0, and h + |h| (rather than h - |h|) vanishes
    exactly on h <= 0.
    """
    total = 0.0
    for i, g in enumerate(problem.equalities):
        total += abs(_checked_eval(g, x, f"equality constraint {i}"))
    for j, h in enumerate(problem.inequalities):
        hv = _checked_eval(h, x, f"inequality constraint {j}")
        total += hv + abs(hv)
    return total


def deformed_objective(
    problem: ConstrainedProblem, params: DeformationParams, x: Point
) -> float:
    """(1-t)*(f(x) - K) + t*M*penalty(x): the constraint-folded objective."""
    f_value = _checked_eval(problem.objective, x, "objective")
    penalty = constraint_penalty(problem, x)
    return (1.0 - params.t) * (f_value - params.bigK) + params.t * params.bigM * penalty


def clip_nonpositive(phi: float) -> float:
    """phi - |phi|, i.e. 2*min(phi, 0): keep only the negative part, doubled."""
    return phi - abs(phi)


def level_gate(f_value: float, k: float) -> float:
    """The nonpositive gate 2*min(f - k, 0); strictly negative iff f < k."""
    return clip_nonpositive(f_value - k)


def make_gate_function(
    problem: ConstrainedProblem,
    params: DeformationParams,
    mode: GateMode = GateMode.RAW_OBJECTIVE,
) -> Callable[[Point], float]:
    """Build the gate x -> (-inf, 0] for the configured mode and level.

    In RAW_OBJECTIVE mode the gate is level_gate(f(x), level). In
    DEFORMED_OBJECTIVE mode it is the clipped deformed objective,
    level_gate(f_t(x), level), with the level read on the deformed scale.
    """
    if mode is GateMode.RAW_OBJECTIVE:

        def gate(x: Point) -> float:
            return level_gate(_checked_eval(problem.objective, x, "objective"), params.level)

    else:

        def gate(x: Point) -> float:
            return level_gate(deformed_objective(problem, params, x), params.level)

    return gate


def gated_value(
    problem: ConstrainedProblem,
    params: DeformationParams,
    mode: GateMode,
    x: Point,
) -> float:
    """The value the gate compares against the level: f(x) or f_t(x)."""
    if mode is GateMode.RAW_OBJECTIVE:
        return _checked_eval(problem.objective, x, "objective")
    return deformed_objective(problem, params, x)
