"""The many-to-one sinusoidal self-map of the box and the augmented objective.

Each coordinate is remapped through

    x_i' = 0.5 * (sin(2**(1/r_i) * x_i) + 1) * (b_i - a_i) + a_i,

which sends the interval [a_i, b_i] onto itself many-to-one; the number of
preimages of any interior target grows as r_i shrinks. Pulling a gate
function back through this map and adding a convex anchor gives the
augmented objective w = u + v that local search actually minimizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .domain import AugmentedPoint, BoxDomain, FrequencyVector, Point, midpoint

# Below this frequency the sine argument scale 2**(1/r) starts to erode
# double-precision argument reduction (2**20 ~ 1e6 at r = 0.05 is still
# fine); smaller values are rejected, not clamped, so callers see the floor.
R_MIN_DEFAULT = 0.05


def _check_frequencies(r: FrequencyVector, r_min: float) -> None:
    for i, ri in enumerate(r):
        if ri < r_min:
            raise ValueError(
                f"frequency r[{i}] = {ri} is below the floor {r_min}; "
                "2**(1/r) would lose sine precision"
            )


def transform_point(
    x: Point,
    r: FrequencyVector,
    box: BoxDomain,
    r_min: float = R_MIN_DEFAULT,
) -> Point:
    """Apply the sinusoidal box self-map to a point.

    The result always lies in the closed box: mathematically the sine
    factor is in [-1, 1], and the final clamp only undoes the <= 1 ulp of
    rounding the affine rescale can leak past an endpoint.
    """
    if not (len(x) == len(r) == box.dimension):
        raise ValueError(
            f"dimension mismatch: x has {len(x)}, r has {len(r)}, "
            f"box has {box.dimension}"
        )
    _check_frequencies(r, r_min)
    out = []
    for xi, ri, a, b in zip(x, r, box.lower, box.upper):
        s = math.sin(2.0 ** (1.0 / ri) * xi)
        yi = 0.5 * (s + 1.0) * (b - a) + a
        out.append(min(max(yi, a), b))
    return Point(out)


def transform_array(
    x: np.ndarray,
    r: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
) -> np.ndarray:
    """Vectorized form of :func:`transform_point` for bulk evaluation.

    Inputs broadcast elementwise; no frequency-floor check is applied here,
    callers validate their own grids.
    """
    s = np.sin(np.exp2(1.0 / r) * x)
    y = 0.5 * (s + 1.0) * (upper - lower) + lower
    return np.clip(y, lower, upper)


def pulled_back_gate(
    gate: Callable[[Point], float],
    x: Point,
    r: FrequencyVector,
    box: BoxDomain,
    r_min: float = R_MIN_DEFAULT,
) -> float:
    """u(x, r) = gate(x'): the gate evaluated through the box self-map."""
    return gate(transform_point(x, r, box, r_min=r_min))


def anchor_term(
    x: Point,
    r: FrequencyVector,
    box: BoxDomain,
    rho: float = 2.0,
    center: Optional[Point] = None,
) -> float:
    """The convex anchor v = sum (c_i - x_i)^2 + sum (rho - r_i)^2.

    ``center`` defaults to the box midpoint but any in-box point may be
    supplied. In tied mode the frequency sum collapses to the single term
    (rho - r_1)^2, matching the one shared frequency actually searched.
    """
    c = center if center is not None else midpoint(box)
    if not (len(x) == len(c) == box.dimension):
        raise ValueError("dimension mismatch between point, center and box")
    v = 0.0
    for ci, xi in zip(c, x):
        v += (ci - xi) ** 2
    if r.tied:
        v += (rho - r[0]) ** 2
    else:
        for ri in r:
            v += (rho - ri) ** 2
    return v


@dataclass(frozen=True)
class AugmentedObjective:
    """Immutable bundle for w(x, r) = gate(x') + anchor(x, r).

    ``gate`` must map into (-inf, 0] for in-box points; that makes
    w <= anchor everywhere, and any point with w < anchor certifies
    gate(x') < 0.
    """

    gate: Callable[[Point], float]
    box: BoxDomain
    anchor: float = 2.0
    tied: bool = True
    center: Optional[Point] = None
    r_min: float = R_MIN_DEFAULT

    def __post_init__(self):
        if not self.anchor > 0.0:
            raise ValueError(f"anchor must be positive, got {self.anchor}")
        if self.center is not None and len(self.center) != self.box.dimension:
            raise ValueError("anchor center dimension does not match the box")

    def gate_part(self, p: AugmentedPoint) -> float:
        return pulled_back_gate(self.gate, p.x, p.r, self.box, r_min=self.r_min)

    def anchor_part(self, p: AugmentedPoint) -> float:
        return anchor_term(p.x, p.r, self.box, rho=self.anchor, center=self.center)


def augmented_objective(aug: AugmentedObjective, p: AugmentedPoint) -> float:
    """w(x, r) = u(x, r) + v(x, r)."""
    return aug.gate_part(p) + aug.anchor_part(p)
