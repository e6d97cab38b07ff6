"""FastAPI application exposing the solver over HTTP.

Domain errors (bad documents, expression faults, evaluation failures)
map to 422 with structured detail; invalid option values map to 400.
A level that is not reached is a normal 200 response with status
``level_not_reached``, mirroring the CLI's exit-code convention.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from starlette.requests import Request

from .. import __version__
from ..driver import GlobalResult, SolveReport
from ..errors import SineLevelError
from ..suite import SuiteRow
from ..tracing import TraceRecord
from . import handlers, schemas


def _trace_rows(records) -> list[schemas.TraceRow]:
    return [
        schemas.TraceRow(
            level=rec.level,
            attempt=rec.attempt,
            iter=rec.iter,
            w=rec.w,
            u=rec.u,
            v=rec.v,
            best_f=rec.best_f,
            x=list(rec.x),
            r=list(rec.r),
        )
        for rec in records
    ]


def _solve_response(report: SolveReport) -> schemas.SolveResponse:
    return schemas.SolveResponse(
        status=report.status.value,
        level=report.level,
        mode=report.mode.value,
        witness=list(report.witness) if report.witness is not None else None,
        witness_value=report.witness_value,
        witness_penalty=report.witness_penalty,
        gate_value=report.gate_value,
        attempts=report.attempts,
        trace=_trace_rows(report.trace) if report.trace else None,
    )


def _global_response(
    result: GlobalResult, traces: tuple[TraceRecord, ...]
) -> schemas.GlobalResponse:
    return schemas.GlobalResponse(
        status=handlers.global_status(result),
        levels=[
            schemas.LevelOutcome(
                level=k,
                status=rep.status.value,
                witness_value=rep.witness_value,
                gate_value=rep.gate_value,
                attempts=rep.attempts,
            )
            for k, rep in result.levels
        ],
        best_point=list(result.best_point) if result.best_point is not None else None,
        best_value=result.best_value,
        trace=_trace_rows(traces) if traces else None,
    )


def _bench_row(row: SuiteRow) -> schemas.BenchRow:
    return schemas.BenchRow(
        name=row.name,
        kind=row.kind,
        status=row.status.value,
        target_level=row.target_level,
        best_value=row.best_value,
        witness=list(row.witness) if row.witness is not None else None,
        witness_penalty=row.witness_penalty,
        gate_value=row.gate_value,
        attempts=row.attempts,
        levels_run=row.levels_run,
        verified=row.verified,
        oracle_best_value=row.oracle.best_value,
        oracle_best_point=list(row.oracle.best_point),
        oracle_step=row.oracle.grid_step,
        oracle_sublevel_nonempty_at=row.oracle.sublevel_nonempty_at,
        annotation=row.annotation,
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="sinelevel",
        version=__version__,
        description=(
            "Certified sublevel search: find points with objective value "
            "strictly below a target level via sinusoidal box "
            "reparametrization, or drive the level down to approach the "
            "global minimum."
        ),
    )

    @app.exception_handler(SineLevelError)
    async def _domain_error(request: Request, exc: SineLevelError) -> JSONResponse:
        payload = {"detail": str(exc)}
        for attr in ("path", "offset", "subexpr"):
            value = getattr(exc, attr, None)
            if value is not None:
                payload[attr] = value
        point = getattr(exc, "point", None)
        if point is not None:
            payload["point"] = list(point)
        return JSONResponse(status_code=422, content=payload)

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/solve", response_model=schemas.SolveResponse)
    def solve(request: schemas.SolveRequest) -> schemas.SolveResponse:
        spec = request.problem.to_spec()
        settings = handlers.SolveSettings(
            level=request.k,
            t=request.t,
            big_k=request.K,
            big_m=request.M,
            rho=request.rho,
            r_init=request.r_init,
            restarts=request.restarts,
            seed=request.seed,
            record_trace=request.trace,
        )
        with _options_guard():
            report = handlers.run_solve(spec, settings)
        return _solve_response(report)

    @app.post("/global", response_model=schemas.GlobalResponse)
    def global_(request: schemas.GlobalRequest) -> schemas.GlobalResponse:
        spec = request.problem.to_spec()
        settings = handlers.GlobalSettings(
            k_init=request.k_init,
            shrink=request.shrink,
            abs_step=request.abs_step,
            max_levels=request.max_levels,
            give_up=request.give_up,
            seed=request.seed,
            record_trace=request.trace,
        )
        with _options_guard():
            result, traces = handlers.run_global(spec, settings)
        return _global_response(result, traces)

    @app.post("/oracle", response_model=schemas.OracleResponse)
    def oracle(request: schemas.OracleRequest) -> schemas.OracleResponse:
        spec = request.problem.to_spec()
        with _options_guard():
            result = handlers.run_oracle(spec, request.step, request.level)
        return schemas.OracleResponse(
            grid_step=result.grid_step,
            best_point=list(result.best_point),
            best_value=result.best_value,
            sublevel_nonempty_at=result.sublevel_nonempty_at,
            best_is_feasible=result.best_is_feasible,
            best_penalty=result.best_penalty,
            points_evaluated=result.points_evaluated,
            error_points=result.error_points,
        )

    @app.post("/bench", response_model=schemas.BenchResponse)
    def bench(request: schemas.BenchRequest) -> schemas.BenchResponse:
        with _options_guard():
            rows, report = handlers.run_bench(request.only, request.seed)
        return schemas.BenchResponse(
            format=report["format"],
            seed=report["seed"],
            rows=[_bench_row(row) for row in rows],
        )

    @app.post("/eval", response_model=schemas.EvalResponse)
    def eval_(request: schemas.EvalRequest) -> schemas.EvalResponse:
        spec = request.problem.to_spec()
        with _options_guard():
            value, penalty = handlers.run_eval(spec, request.at)
        return schemas.EvalResponse(value=value, penalty=penalty)

    return app


class _options_guard:
    """Re-raise option-validation ValueErrors as HTTP 400."""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is not None and issubclass(exc_type, ValueError):
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return False


app = create_app()
