"""Constraint penalty, deformed objective, clipping, and level gates."""

import math

import pytest

from sinelevel import (
    BoxDomain,
    ConstrainedProblem,
    DeformationParams,
    EvaluationError,
    GateMode,
    Point,
    clip_nonpositive,
    constraint_penalty,
    deformed_objective,
    gated_value,
    level_gate,
    make_gate_function,
)

BOX = BoxDomain((-2.0,), (2.0,))
X = Point([0.0])


def _problem(objective=lambda x: 5.0, equalities=(), inequalities=()):
    return ConstrainedProblem(objective, BOX, equalities=equalities, inequalities=inequalities)


def test_penalty_vanishes_on_feasible_values():
    prob = _problem(equalities=(lambda x: 0.0,), inequalities=(lambda x: -1.0,))
    assert constraint_penalty(prob, X) == 0.0


def test_penalty_equality_violation():
    prob = _problem(equalities=(lambda x: 0.2,), inequalities=(lambda x: -1.0,))
    assert constraint_penalty(prob, X) == 0.2


def test_penalty_inequality_violation_doubles():
    prob = _problem(inequalities=(lambda x: 0.5,))
    assert constraint_penalty(prob, X) == 1.0  # 0.5 + |0.5|


def test_penalty_plus_sign_keeps_interior_free():
    # h + |h| must vanish on all of h <= 0, not only at h = 0
    for h in (-3.0, -1e-12, 0.0):
        prob = _problem(inequalities=(lambda x, h=h: h,))
        assert constraint_penalty(prob, X) == 0.0


def test_deformed_objective_with_violations():
    prob = _problem(equalities=(lambda x: 0.2,), inequalities=(lambda x: -1.0,))
    params = DeformationParams(t=0.9, bigK=10.0, bigM=100.0)
    # 0.1*(5-10) + 0.9*100*0.2; the double result is exactly 17.5
    assert deformed_objective(prob, params, X) == 17.5


def test_deformed_objective_feasible_point():
    prob = _problem(equalities=(lambda x: 0.0,))
    params = DeformationParams(t=0.9, bigK=10.0, bigM=100.0)
    value = deformed_objective(prob, params, X)
    # 0.1*(5-10): nearest double to -0.5 given (1-0.9) rounding
    assert value == -0.4999999999999999
    assert math.isclose(value, -0.5, abs_tol=1e-15)


def test_deformed_objective_zero_when_f_equals_shift():
    prob = _problem(objective=lambda x: 10.0)
    for t in (0.5, 0.9, 0.99):
        params = DeformationParams(t=t, bigK=10.0, bigM=100.0)
        assert deformed_objective(prob, params, X) == 0.0


def test_deformed_objective_preserves_order_at_equal_penalty():
    params = DeformationParams(t=0.9, bigK=10.0, bigM=100.0)
    values = [-3.0, 0.0, 1.0, 4.5]
    deformed = [
        deformed_objective(_problem(objective=lambda x, f=f: f), params, X)
        for f in values
    ]
    assert deformed == sorted(deformed)


def test_clip_nonpositive():
    assert clip_nonpositive(3.0) == 0.0
    assert clip_nonpositive(-2.0) == -4.0
    assert clip_nonpositive(0.0) == 0.0


def test_level_gate_values():
    assert level_gate(3.0, 5.0) == -4.0
    assert level_gate(7.0, 5.0) == 0.0
    assert level_gate(5.0, 5.0) == 0.0


def test_level_gate_sign_equivalence_boundaries():
    for f, k in ((1.0, 1.0), (0.0, -0.0), (-0.0, 0.0), (5e-324, 0.0), (0.0, 5e-324)):
        assert (level_gate(f, k) < 0.0) == (f < k)


def test_raw_gate_function():
    prob = _problem(objective=lambda x: x[0] * x[0])
    gate = make_gate_function(prob, DeformationParams(level=1.0), GateMode.RAW_OBJECTIVE)
    assert gate(Point([0.0])) == -2.0
    assert gate(Point([2.0])) == 0.0


def test_deformed_gate_function():
    prob = _problem(equalities=(lambda x: 0.0,))
    params = DeformationParams(t=0.9, bigK=10.0, bigM=100.0, level=0.0)
    gate = make_gate_function(prob, params, GateMode.DEFORMED_OBJECTIVE)
    value = gate(X)
    assert value == -0.9999999999999998  # 2 * (0.1*(5-10))
    assert math.isclose(value, -1.0, rel_tol=1e-12)


def test_gated_value_matches_mode():
    prob = _problem(equalities=(lambda x: 0.2,))
    params = DeformationParams(t=0.9, bigK=10.0, bigM=100.0)
    assert gated_value(prob, params, GateMode.RAW_OBJECTIVE, X) == 5.0
    assert gated_value(prob, params, GateMode.DEFORMED_OBJECTIVE, X) == deformed_objective(
        prob, params, X
    )


def test_non_finite_objective_is_an_evaluation_error():
    prob = _problem(objective=lambda x: math.inf)
    with pytest.raises(EvaluationError) as err:
        gated_value(prob, DeformationParams(), GateMode.RAW_OBJECTIVE, X)
    assert err.value.point == X


def test_raising_objective_is_wrapped():
    def bad(x):
        raise ZeroDivisionError("boom")

    with pytest.raises(EvaluationError, match="objective"):
        gated_value(_problem(objective=bad), DeformationParams(), GateMode.RAW_OBJECTIVE, X)


def test_raising_constraint_is_named():
    prob = _problem(equalities=(lambda x: math.nan,))
    with pytest.raises(EvaluationError, match="equality constraint 0"):
        constraint_penalty(prob, X)


def test_params_validation():
    with pytest.raises(ValueError):
        DeformationParams(t=0.0)
    with pytest.raises(ValueError):
        DeformationParams(t=1.0)
    with pytest.raises(ValueError):
        DeformationParams(bigM=0.0)
    with pytest.raises(ValueError):
        DeformationParams(anchor=-1.0)
    with pytest.raises(ValueError):
        DeformationParams(level=math.inf)


def test_gate_mode_wire_values():
    assert GateMode.RAW_OBJECTIVE.value == "raw"
    assert GateMode.DEFORMED_OBJECTIVE.value == "deformed"
