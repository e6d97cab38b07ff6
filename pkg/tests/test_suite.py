"""Built-in benchmark suite and its machine reports."""

import json

import pytest

from sinelevel import (
    AugmentedPoint,
    FrequencyVector,
    GateMode,
    Point,
    SUITE,
    SUITE_NAMES,
    SolveReport,
    SolveStatus,
    format_summary_table,
    machine_report,
    render_machine_report,
    row_to_mapping,
    run_builtin_suite,
    suite_case,
)
from sinelevel.suite import _verify_success

EXPECTED_STATUS = {
    "sphere1d": SolveStatus.SUCCESS,
    "sphere2d": SolveStatus.SUCCESS,
    "sphere4d": SolveStatus.SUCCESS,
    "clipped-sphere4d-055": SolveStatus.LEVEL_NOT_REACHED,
    "clipped-sphere4d-150": SolveStatus.SUCCESS,
    "rastrigin2d": SolveStatus.SUCCESS,
    "rosenbrock2d": SolveStatus.SUCCESS,
    "eqcon-circle": SolveStatus.SUCCESS,
    "ineqcon-halfplane": SolveStatus.SUCCESS,
}


@pytest.fixture(scope="module")
def full_run():
    return run_builtin_suite(seed=42)


def test_suite_names_are_registered_in_order():
    assert SUITE_NAMES == (
        "sphere1d",
        "sphere2d",
        "sphere4d",
        "clipped-sphere4d-055",
        "clipped-sphere4d-150",
        "rastrigin2d",
        "rosenbrock2d",
        "eqcon-circle",
        "ineqcon-halfplane",
    )
    assert len(SUITE) == 9


def test_full_run_statuses(full_run):
    assert [row.name for row in full_run] == list(SUITE_NAMES)
    for row in full_run:
        assert row.status is EXPECTED_STATUS[row.name], row.name


def test_success_rows_are_verified(full_run):
    for row in full_run:
        if row.status is SolveStatus.SUCCESS:
            assert row.verified is True, row.name
        else:
            assert row.verified is None, row.name
        assert row.wall_time >= 0.0


def test_unreachable_level_row(full_run):
    row = next(r for r in full_run if r.name == "clipped-sphere4d-055")
    assert row.gate_value == 0.0  # gate never opened
    assert row.attempts == 31  # full default schedule exhausted
    assert row.witness is None
    assert row.oracle.best_value == 1.0
    assert row.oracle.sublevel_nonempty_at is None
    assert "infeasible" in row.annotation


def test_reachable_sibling_row(full_run):
    row = next(r for r in full_run if r.name == "clipped-sphere4d-150")
    assert row.best_value < 1.5
    assert row.oracle.sublevel_nonempty_at == 1.5


def test_sphere1d_row(full_run):
    row = next(r for r in full_run if r.name == "sphere1d")
    assert 0.8 < row.witness[0] < 1.2
    assert row.best_value < 0.04
    assert row.oracle.best_value == 0.0  # x = 1.0 lies on the 1e-3 lattice
    assert row.oracle.sublevel_nonempty_at == 0.04
    assert row.witness_penalty is None


def test_constrained_rows_report_penalties(full_run):
    eq = next(r for r in full_run if r.name == "eqcon-circle")
    assert eq.attempts == 1  # certified on the deterministic first start
    assert eq.witness_penalty is not None and eq.witness_penalty >= 0.0
    assert eq.oracle.best_is_feasible is True
    ineq = next(r for r in full_run if r.name == "ineqcon-halfplane")
    assert ineq.witness_penalty is not None
    assert ineq.witness[0] + ineq.witness[1] - 1.0 <= 0.0  # feasible witness


def test_global_row_aggregates_levels(full_run):
    row = next(r for r in full_run if r.name == "rastrigin2d")
    assert row.kind == "global"
    assert row.levels_run > 1
    assert row.best_value <= 0.5
    assert row.target_level == 40.0
    assert row.gate_value is None
    assert len(row.reports) == row.levels_run


def test_row_mapping_shape(full_run):
    mapping = row_to_mapping(full_run[0])
    assert set(mapping) == {
        "name",
        "kind",
        "status",
        "target_level",
        "best_value",
        "witness",
        "witness_penalty",
        "gate_value",
        "attempts",
        "levels_run",
        "verified",
        "oracle_best_value",
        "oracle_best_point",
        "oracle_step",
        "oracle_sublevel_nonempty_at",
        "annotation",
    }
    assert "wall_time" not in mapping and "reports" not in mapping
    json.dumps(mapping)  # JSON-ready without custom encoders


def test_machine_report_is_deterministic():
    names = ["sphere1d", "sphere2d"]
    a = render_machine_report(machine_report(run_builtin_suite(names, seed=42), 42))
    b = render_machine_report(machine_report(run_builtin_suite(names, seed=42), 42))
    assert a == b
    doc = json.loads(a)
    assert doc["format"] == "sinelevel-bench-v1"
    assert doc["seed"] == 42
    assert [row["name"] for row in doc["rows"]] == names
    assert a.endswith("\n")


def test_subset_selection_and_order():
    rows = run_builtin_suite(["sphere2d", "sphere1d"], seed=0)
    assert [row.name for row in rows] == ["sphere2d", "sphere1d"]


def test_unknown_names_rejected():
    with pytest.raises(ValueError, match="unknown suite problem"):
        run_builtin_suite(["sphere1d", "nope"], seed=0)
    with pytest.raises(ValueError, match="sphere1d"):
        suite_case("nope")
    assert suite_case("sphere1d").name == "sphere1d"


def test_empty_selection():
    assert run_builtin_suite([], seed=0) == []
    table = format_summary_table([])
    assert len(table.splitlines()) == 2


def test_summary_table_contains_rows(full_run):
    table = format_summary_table(full_run)
    lines = table.splitlines()
    assert len(lines) == 2 + len(full_run)
    assert lines[0].split()[:3] == ["name", "kind", "status"]
    assert "sphere1d" in table and "rastrigin2d" in table


def _fake_report(witness, level=0.04):
    return SolveReport(
        status=SolveStatus.SUCCESS,
        level=level,
        mode=GateMode.RAW_OBJECTIVE,
        raw_minimizer=AugmentedPoint(Point([0.0]), FrequencyVector([1.0])),
        gate_value=-0.01,
        attempts=1,
        witness=witness,
        witness_value=None,
    )


def test_verification_rejects_out_of_box_witness():
    case = suite_case("sphere1d")
    assert _verify_success(case, _fake_report(Point([5.0]))) is False


def test_verification_rejects_level_violation():
    case = suite_case("sphere1d")
    # f(0) = 1 is not strictly below 0.04
    assert _verify_success(case, _fake_report(Point([0.0]))) is False
    assert _verify_success(case, _fake_report(Point([1.0]))) is True
