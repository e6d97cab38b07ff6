"""Per-iteration trace records and their CSV serialization."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from .domain import FrequencyVector, Point


@dataclass(frozen=True)
class TraceRecord:
    """One search iteration: the augmented value w split into gate part u
    and anchor part v, plus the best gated objective value seen so far."""

    level: float
    attempt: int
    iter: int
    w: float
    u: float
    v: float
    best_f: float
    x: Point
    r: FrequencyVector


def trace_header(dimension: int) -> list[str]:
    cols = ["level", "attempt", "iter", "w", "u", "v", "best_f"]
    cols += [f"x{i + 1}" for i in range(dimension)]
    cols += [f"r{i + 1}" for i in range(dimension)]
    return cols


def write_trace_csv(records: Iterable[TraceRecord], stream: IO[str], dimension: int) -> int:
    """Write records to an open text stream; returns the row count."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(trace_header(dimension))
    count = 0
    for rec in records:
        row: list = [
            repr(rec.level),
            rec.attempt,
            rec.iter,
            repr(rec.w),
            repr(rec.u),
            repr(rec.v),
            repr(rec.best_f),
        ]
        row += [repr(c) for c in rec.x]
        row += [repr(v) for v in rec.r]
        writer.writerow(row)
        count += 1
    return count


def save_trace(records: Sequence[TraceRecord], path: str, dimension: int) -> int:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        return write_trace_csv(records, fh, dimension)
