"""Core value types: boxes, points, frequency vectors, problem definitions.

Everything here is an immutable value; instances are safe to share between
threads and to use as dict keys.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence


def _as_floats(values: Sequence[float], what: str) -> tuple[float, ...]:
    out = tuple(float(v) for v in values)
    if not all(math.isfinite(v) for v in out):
        raise ValueError(f"{what} must be finite, got {out}")
    return out


@dataclass(frozen=True)
class Point:
    """A point in p-dimensional space."""

    coords: tuple[float, ...]

    def __init__(self, coords: Sequence[float]):
        object.__setattr__(self, "coords", _as_floats(coords, "point coordinates"))
        if len(self.coords) < 1:
            raise ValueError("a point needs at least one coordinate")

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> float:
        return self.coords[i]

    def __iter__(self) -> Iterator[float]:
        return iter(self.coords)


@dataclass(frozen=True)
class BoxDomain:
    """A product of closed intervals [a_i, b_i], the search region.

    Intervals must be non-degenerate (a_i < b_i strictly); a flat interval
    would collapse the sinusoidal reparametrization to a constant, so it is
    rejected at construction rather than silently tolerated.
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __init__(self, lower: Sequence[float], upper: Sequence[float]):
        lo = _as_floats(lower, "box lower bounds")
        hi = _as_floats(upper, "box upper bounds")
        if len(lo) != len(hi):
            raise ValueError(f"bound dimensions differ: {len(lo)} vs {len(hi)}")
        if len(lo) < 1:
            raise ValueError("box dimension must be at least 1")
        for i, (a, b) in enumerate(zip(lo, hi)):
            if not a < b:
                raise ValueError(f"interval {i} is degenerate or inverted: [{a}, {b}]")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dimension(self) -> int:
        return len(self.lower)

    def widths(self) -> tuple[float, ...]:
        return tuple(b - a for a, b in zip(self.lower, self.upper))

    def lower_corner(self) -> Point:
        return Point(self.lower)


def midpoint(box: BoxDomain) -> Point:
    """Componentwise midpoints (a_i + b_i)/2."""
    return Point(tuple((a + b) / 2.0 for a, b in zip(box.lower, box.upper)))


def contains(box: BoxDomain, x: Point) -> bool:
    """True iff a_i <= x_i <= b_i for every i (closed intervals)."""
    if len(x) != box.dimension:
        raise ValueError(
            f"dimension mismatch: point has {len(x)}, box has {box.dimension}"
        )
    return all(a <= xi <= b for a, xi, b in zip(box.lower, x, box.upper))


@dataclass(frozen=True)
class FrequencyVector:
    """Positive oscillation frequencies r_1..r_p.

    ``tied`` means a single shared frequency: every component is required to
    be bit-identical, which is how the search drivers treat the tied mode.
    """

    values: tuple[float, ...]
    tied: bool = False

    def __init__(self, values: Sequence[float], tied: bool = False):
        vals = _as_floats(values, "frequencies")
        if len(vals) < 1:
            raise ValueError("frequency vector needs at least one component")
        if any(v <= 0.0 for v in vals):
            raise ValueError(f"frequencies must be positive, got {vals}")
        if tied and any(v != vals[0] for v in vals):
            raise ValueError(f"tied frequency vector has unequal components: {vals}")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "tied", bool(tied))

    @classmethod
    def tied_value(cls, r: float, dimension: int) -> "FrequencyVector":
        return cls((float(r),) * dimension, tied=True)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> float:
        return self.values[i]

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)


@dataclass(frozen=True)
class AugmentedPoint:
    """The search variable (x, r): a spatial point plus frequencies."""

    x: Point
    r: FrequencyVector

    def __post_init__(self):
        if len(self.x) != len(self.r):
            raise ValueError(
                f"dimension mismatch: x has {len(self.x)}, r has {len(self.r)}"
            )


@dataclass(frozen=True)
class ConstrainedProblem:
    """A box-constrained problem: minimize ``objective`` subject to
    g_i(x) = 0 (equalities) and h_j(x) <= 0 (inequalities) over ``domain``.

    Component functions take a :class:`Point` and return a float; they are
    expected to be total on the box. Empty constraint lists give a plain
    box-constrained problem.
    """

    objective: Callable[[Point], float]
    domain: BoxDomain
    equalities: tuple[Callable[[Point], float], ...] = field(default_factory=tuple)
    inequalities: tuple[Callable[[Point], float], ...] = field(default_factory=tuple)
    name: str = ""

    def __init__(
        self,
        objective: Callable[[Point], float],
        domain: BoxDomain,
        equalities: Sequence[Callable[[Point], float]] = (),
        inequalities: Sequence[Callable[[Point], float]] = (),
        name: str = "",
    ):
        if not callable(objective):
            raise ValueError("objective must be callable")
        object.__setattr__(self, "objective", objective)
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "equalities", tuple(equalities))
        object.__setattr__(self, "inequalities", tuple(inequalities))
        object.__setattr__(self, "name", name)

    @property
    def is_constrained(self) -> bool:
        return bool(self.equalities) or bool(self.inequalities)
