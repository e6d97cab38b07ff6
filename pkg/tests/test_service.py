"""HTTP API routes, including the error-mapping contract."""

import pytest
from fastapi.testclient import TestClient

import sinelevel
from sinelevel.service.app import app, create_app

client = TestClient(app)

SPHERE_1D = {
    "dimension": 1,
    "box": [[-1.5, 1.5]],
    "objective": "(x1 - 1)^2",
}


def test_health():
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok", "version": sinelevel.__version__}


def test_solve_success_with_trace():
    resp = client.post(
        "/solve", json={"problem": SPHERE_1D, "k": 0.04, "trace": True}
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["status"] == "success"
    assert body["mode"] == "raw"
    assert body["level"] == 0.04
    assert 0.8 < body["witness"][0] < 1.2
    assert body["witness_value"] < 0.04
    assert body["witness_penalty"] is None
    assert body["gate_value"] < 0.0
    assert body["attempts"] >= 1
    assert body["trace"]
    row = body["trace"][0]
    assert set(row) == {"level", "attempt", "iter", "w", "u", "v", "best_f", "x", "r"}
    assert row["u"] <= 0.0


def test_solve_level_not_reached_is_a_normal_response():
    resp = client.post(
        "/solve", json={"problem": SPHERE_1D, "k": -1.0, "restarts": 3}
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["status"] == "level_not_reached"
    assert body["witness"] is None
    assert body["gate_value"] == 0.0
    assert body["attempts"] == 3
    assert body["trace"] is None


def test_solve_file_params_can_be_overridden():
    problem = dict(SPHERE_1D, params={"t": 0.9, "M": 2.0})
    resp = client.post("/solve", json={"problem": problem, "k": 0.04, "M": 5.0})
    assert resp.status_code == 200
    assert resp.json()["status"] == "success"


def test_bad_box_is_422_with_field_path():
    problem = dict(SPHERE_1D, box=[[1.5, -1.5]])
    resp = client.post("/solve", json={"problem": problem, "k": 0.04})
    assert resp.status_code == 422
    body = resp.json()
    assert body["path"] == "box"
    assert "detail" in body


def test_bad_objective_is_422_with_offset_in_detail():
    problem = dict(SPHERE_1D, objective="x1 +")
    resp = client.post("/solve", json={"problem": problem, "k": 0.04})
    assert resp.status_code == 422
    body = resp.json()
    assert body["path"] == "objective"
    assert "at offset" in body["detail"]


def test_bad_option_value_is_400():
    resp = client.post("/solve", json={"problem": SPHERE_1D, "k": 0.04, "t": 2.0})
    assert resp.status_code == 400
    assert "t must" in resp.json()["detail"]


def test_unknown_request_key_is_rejected():
    resp = client.post(
        "/solve", json={"problem": SPHERE_1D, "k": 0.04, "bogus": 1}
    )
    assert resp.status_code == 422


def test_missing_required_key_is_rejected():
    resp = client.post("/solve", json={"problem": SPHERE_1D})
    assert resp.status_code == 422


def test_global_route():
    problem = {"dimension": 1, "box": [[-1.0, 1.0]], "objective": "x1^2"}
    resp = client.post(
        "/global", json={"problem": problem, "k_init": 1.0, "max_levels": 20}
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["status"] == "success"
    assert body["best_value"] <= 1e-3
    assert body["best_point"][0] ** 2 == body["best_value"]
    assert body["levels"][0]["level"] == 1.0
    assert body["levels"][0]["status"] == "success"
    assert body["levels"][-1]["status"] == "level_not_reached"


def test_oracle_route():
    problem = {"dimension": 1, "box": [[-1.0, 1.0]], "objective": "x1^2"}
    resp = client.post("/oracle", json={"problem": problem, "step": 0.5, "level": 0.3})
    assert resp.status_code == 200
    body = resp.json()
    assert body["best_value"] == 0.0
    assert body["best_point"] == [0.0]
    assert body["points_evaluated"] == 5
    assert body["sublevel_nonempty_at"] == 0.3
    assert body["best_is_feasible"] is None


def test_oracle_guard_is_400():
    problem = {
        "dimension": 5,
        "box": [[0.0, 1.0]] * 5,
        "objective": "x1",
    }
    resp = client.post("/oracle", json={"problem": problem, "step": 0.01})
    assert resp.status_code == 400
    assert "guard" in resp.json()["detail"]


def test_eval_route_reports_value_and_penalty():
    problem = {
        "dimension": 2,
        "box": [[-2.0, 2.0], [-2.0, 2.0]],
        "objective": "x1 + x2",
        "equalities": ["x1^2 + x2^2 - 1"],
    }
    resp = client.post("/eval", json={"problem": problem, "at": [1.0, 0.0]})
    assert resp.status_code == 200
    assert resp.json() == {"value": 1.0, "penalty": 0.0}


def test_eval_unconstrained_penalty_is_null():
    resp = client.post("/eval", json={"problem": SPHERE_1D, "at": [0.0]})
    assert resp.status_code == 200
    assert resp.json() == {"value": 1.0, "penalty": None}


def test_eval_domain_fault_is_422_with_subexpr_and_point():
    problem = {"dimension": 1, "box": [[-1.0, 1.0]], "objective": "1/x1"}
    resp = client.post("/eval", json={"problem": problem, "at": [0.0]})
    assert resp.status_code == 422
    body = resp.json()
    assert body["subexpr"] == "1.0 / x1"
    assert body["point"] == [0.0]
    assert "division by zero" in body["detail"]


def test_eval_dimension_mismatch_is_400():
    resp = client.post("/eval", json={"problem": SPHERE_1D, "at": [1.0, 2.0]})
    assert resp.status_code == 400
    assert "dimension" in resp.json()["detail"]


def test_bench_route_subset():
    resp = client.post("/bench", json={"only": ["sphere1d"], "seed": 42})
    assert resp.status_code == 200
    body = resp.json()
    assert body["format"] == "sinelevel-bench-v1"
    assert body["seed"] == 42
    assert len(body["rows"]) == 1
    row = body["rows"][0]
    assert row["name"] == "sphere1d"
    assert row["status"] == "success"
    assert row["verified"] is True


def test_bench_unknown_name_is_400():
    resp = client.post("/bench", json={"only": ["nope"]})
    assert resp.status_code == 400
    assert "unknown suite problem" in resp.json()["detail"]


def test_create_app_returns_fresh_instances():
    assert create_app() is not app
