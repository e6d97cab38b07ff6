"""Certified sublevel search over box domains.

The package finds points whose objective value lies strictly below a
target level by minimizing an augmented objective over the original
coordinates plus sinusoidal frequency parameters, and approaches global
minima by repeatedly lowering the level. Every success is a certificate:
a concrete in-box point whose objective value is re-verified below the
level by direct evaluation.

Layered API, lowest first: ``domain`` (points, boxes, problems),
``deformation`` (penalty, level gate, deformed objective), ``reparam``
(the sinusoidal box self-map and the augmented objective), ``solver``
(deterministic Nelder-Mead), ``driver`` (level search, cross-section
variant, global loop), ``expressions`` (text problem format), ``oracle``
and ``suite`` (grid verification and the benchmark harness). An HTTP
front end lives in ``sinelevel.service``; the ``sinelevel`` console
script exposes the same operations.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .deformation import (
    DeformationParams,
    GateMode,
    clip_nonpositive,
    constraint_penalty,
    deformed_objective,
    gated_value,
    level_gate,
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
from .driver import (
    GlobalMinimizeOptions,
    GlobalResult,
    LevelSolveOptions,
    SolveReport,
    SolveStatus,
    XStartPolicy,
    cross_section_solve,
    global_minimize,
    level_solve,
)
from .errors import (
    AllStartsFailedError,
    EvaluationError,
    ExpressionDomainError,
    ExpressionError,
    ExpressionSyntaxError,
    ProblemFormatError,
    SineLevelError,
)
from .expressions import (
    ProblemParams,
    ProblemSpec,
    compile_expression,
    eval_expression,
    format_expression,
    load_problem,
    max_var_index,
    parse_expression,
    problem_from_mapping,
    read_problem_file,
    spec_to_mapping,
)
from .oracle import OracleResult, grid_oracle
from .reparam import (
    R_MIN_DEFAULT,
    AugmentedObjective,
    anchor_term,
    augmented_objective,
    pulled_back_gate,
    transform_array,
    transform_point,
)
from .solver import (
    LocalResult,
    SolverConfig,
    multistart_minimize,
    nelder_mead_minimize,
)
from .suite import (
    SUITE,
    SUITE_NAMES,
    CertificateViolation,
    SuiteCase,
    SuiteRow,
    format_summary_table,
    machine_report,
    render_machine_report,
    row_to_mapping,
    run_builtin_suite,
    suite_case,
)
from .tracing import TraceRecord, save_trace, trace_header, write_trace_csv

__all__ = [
    "__version__",
    # domain
    "Point", "BoxDomain", "FrequencyVector", "AugmentedPoint",
    "ConstrainedProblem", "midpoint", "contains",
    # deformation
    "DeformationParams", "GateMode", "constraint_penalty",
    "deformed_objective", "clip_nonpositive", "level_gate",
    "make_gate_function", "gated_value",
    # reparam
    "R_MIN_DEFAULT", "transform_point", "transform_array",
    "pulled_back_gate", "anchor_term", "AugmentedObjective",
    "augmented_objective",
    # solver
    "SolverConfig", "LocalResult", "nelder_mead_minimize",
    "multistart_minimize",
    # driver
    "SolveStatus", "XStartPolicy", "LevelSolveOptions", "SolveReport",
    "GlobalMinimizeOptions", "GlobalResult", "level_solve",
    "cross_section_solve", "global_minimize",
    # expressions / problem files
    "parse_expression", "eval_expression", "format_expression",
    "compile_expression", "max_var_index", "ProblemParams", "ProblemSpec",
    "problem_from_mapping", "load_problem", "read_problem_file",
    "spec_to_mapping",
    # oracle / suite
    "OracleResult", "grid_oracle", "SUITE", "SUITE_NAMES", "SuiteCase",
    "SuiteRow", "suite_case", "run_builtin_suite", "machine_report",
    "row_to_mapping", "render_machine_report", "format_summary_table",
    "CertificateViolation",
    # tracing
    "TraceRecord", "trace_header", "write_trace_csv", "save_trace",
    # errors
    "SineLevelError", "EvaluationError", "ExpressionError",
    "ExpressionSyntaxError", "ExpressionDomainError", "ProblemFormatError",
    "AllStartsFailedError",
]
