"""Request and response models for the HTTP API.

``ProblemDocument`` mirrors the problem file format one to one; payloads
are re-validated by the core loader so the API and the CLI reject exactly
the same documents with the same field-path diagnostics.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict

from ..expressions import ProblemSpec, problem_from_mapping


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ParamsDocument(_Strict):
    t: Optional[float] = None
    K: Optional[float] = None
    M: Optional[float] = None
    k: Optional[float] = None
    rho: Optional[float] = None
    r_init: Optional[float] = None


class ProblemDocument(_Strict):
    """The problem file format as an API payload."""

    dimension: int
    box: list[list[float]]
    objective: str
    equalities: list[str] = []
    inequalities: list[str] = []
    params: ParamsDocument = ParamsDocument()

    def to_spec(self) -> ProblemSpec:
        # exclude_unset keeps absent optional params absent, so the core
        # loader applies its own defaults exactly as for files
        return problem_from_mapping(self.model_dump(exclude_unset=True))


class SolveRequest(_Strict):
    problem: ProblemDocument
    k: float
    t: Optional[float] = None
    K: Optional[float] = None
    M: Optional[float] = None
    rho: Optional[float] = None
    r_init: Optional[float] = None
    restarts: Optional[int] = None
    seed: int = 0
    trace: bool = False


class GlobalRequest(_Strict):
    problem: ProblemDocument
    k_init: float
    shrink: float = 0.5
    abs_step: float = 1e-4
    max_levels: int = 40
    give_up: int = 3
    seed: int = 0
    trace: bool = False


class OracleRequest(_Strict):
    problem: ProblemDocument
    step: float
    level: Optional[float] = None


class BenchRequest(_Strict):
    only: Optional[list[str]] = None
    seed: int = 0


class EvalRequest(_Strict):
    problem: ProblemDocument
    at: list[float]


Status = Literal["success", "level_not_reached"]


class TraceRow(BaseModel):
    level: float
    attempt: int
    iter: int
    w: float
    u: float
    v: float
    best_f: float
    x: list[float]
    r: list[float]


class SolveResponse(BaseModel):
    status: Status
    level: float
    mode: Literal["raw", "deformed"]
    witness: Optional[list[float]]
    witness_value: Optional[float]
    witness_penalty: Optional[float]
    gate_value: float
    attempts: int
    trace: Optional[list[TraceRow]] = None


class LevelOutcome(BaseModel):
    level: float
    status: Status
    witness_value: Optional[float]
    gate_value: float
    attempts: int


class GlobalResponse(BaseModel):
    status: Status
    levels: list[LevelOutcome]
    best_point: Optional[list[float]]
    best_value: Optional[float]
    trace: Optional[list[TraceRow]] = None


class OracleResponse(BaseModel):
    grid_step: float
    best_point: list[float]
    best_value: float
    sublevel_nonempty_at: Optional[float]
    best_is_feasible: Optional[bool]
    best_penalty: Optional[float]
    points_evaluated: int
    error_points: int


class BenchRow(BaseModel):
    name: str
    kind: Literal["level", "global"]
    status: Status
    target_level: float
    best_value: Optional[float]
    witness: Optional[list[float]]
    witness_penalty: Optional[float]
    gate_value: Optional[float]
    attempts: int
    levels_run: int
    verified: Optional[bool]
    oracle_best_value: float
    oracle_best_point: list[float]
    oracle_step: float
    oracle_sublevel_nonempty_at: Optional[float]
    annotation: str


class BenchResponse(BaseModel):
    format: str
    seed: int
    rows: list[BenchRow]


class EvalResponse(BaseModel):
    value: float
    penalty: Optional[float]


class HealthResponse(BaseModel):
    status: str
    version: str
