"""HTTP layer: one round trip per endpoint plus error mapping."""

import math

import pytest
from fastapi.testclient import TestClient

from qhlab.reports import report_from_text
from qhlab.service.app import app

client = TestClient(app)

DISC = {"kind": "disc"}
HALFPLANE = {"kind": "halfplane"}


def test_health():
    body = client.get("/v1/health").json()
    assert body["status"] == "ok"
    assert body["version"]


def test_distance_endpoint():
    r = client.post("/v1/distance", json={
        "domain": HALFPLANE, "a": [1.0, 0.0], "b": [4.0, 0.0]})
    assert r.status_code == 200
    body = r.json()
    assert body["value"] == pytest.approx(math.log(4.0), rel=0.01)
    assert body["converged"] is True
    assert body["error_estimate"] < 0.01


def test_distance_error_mapping():
    r = client.post("/v1/distance", json={
        "domain": DISC, "a": [2.0, 0.0], "b": [0.0, 0.0]})
    assert r.status_code == 422
    assert r.json()["error"] == "PointOutsideDomain"

    r = client.post("/v1/distance", json={
        "domain": {"kind": "torus"}, "a": [0.0, 0.0], "b": [0.1, 0.0]})
    assert r.status_code == 422
    assert r.json()["error"] == "ConfigError"


def test_geodesic_endpoint():
    req = {"domain": DISC, "a": [0.0, 0.0], "b": [0.5, 0.0]}
    r = client.post("/v1/geodesic", json=req)
    assert r.status_code == 200
    body = r.json()
    assert body["value"] == pytest.approx(math.log(2.0), rel=0.01)
    pts = body["points"]
    assert pts[0] == pytest.approx([0.0, 0.0], abs=1e-12)
    assert pts[-1] == pytest.approx([0.5, 0.0], abs=1e-12)
    # distance and geodesic must agree on the value
    d = client.post("/v1/distance", json=req).json()
    assert d["value"] == body["value"]


def test_pair_bounds_endpoint():
    r = client.post("/v1/bounds/pair", json={
        "domain": DISC, "a": [0.75, 0.0], "b": [0.5, 0.0],
        "c_values": [1.2, 2.0]})
    assert r.status_code == 200
    body = r.json()
    # radial pair at depths t, 2t: both closed forms collapse to log 2
    assert body["s"] == pytest.approx(math.log(2.0), abs=1e-12)
    assert body["ghm"] == pytest.approx(math.log(2.0), abs=1e-12)
    assert body["d_a"] == pytest.approx(0.25)
    assert body["sep"] == pytest.approx(0.25)
    assert [n["c"] for n in body["na"]] == [1.2, 2.0]
    assert all(n["value"] >= body["s"] for n in body["na"])


def test_pair_bounds_validation():
    r = client.post("/v1/bounds/pair", json={
        "domain": DISC, "a": [0.75, 0.0], "b": [0.5, 0.0],
        "c_values": [0.9]})
    assert r.status_code == 422  # pydantic: constants must exceed 1


def test_modulus_verdicts_endpoint():
    r = client.post("/v1/modulus/verdicts", json={
        "modulus": {"family": "power", "coeff": 1.0, "exponent": 0.5},
        "omega_star_at": []})
    body = r.json()
    assert body["dini"]["convergent"] is True
    assert body["dini"]["value"] == pytest.approx(2.0, abs=1e-6)
    assert body["log_dini"]["value"] == pytest.approx(-4.0, abs=1e-5)

    r = client.post("/v1/modulus/verdicts", json={
        "modulus": {"family": "power", "coeff": 1.0, "exponent": 1.0,
                    "cap": 1.0},
        "omega_star_at": [1.0, 0.1]})
    body = r.json()
    assert body["omega_star"][0] == pytest.approx(2.0, abs=1e-6)
    assert body["omega_star"][1] == pytest.approx(
        0.1 * (2.0 + math.log(10.0)), abs=1e-5)

    r = client.post("/v1/modulus/verdicts", json={
        "modulus": {"family": "power", "coeff": 1.0, "exponent": 0.5},
        "omega_star_at": [1.0]})
    assert r.status_code == 422
    assert r.json()["error"] == "UnboundedModulus"


def test_jacobian_sweep_endpoint():
    r = client.post("/v1/flatten/jacobian", json={
        "domain": {"kind": "paraboloid", "params": {"kappa": 1.0}},
        "map": "normal", "n_points": 50})
    assert r.status_code == 200
    body = r.json()
    assert body["passed"] is True
    assert body["n_failed"] == 0
    assert body["n_points"] == 50
    assert body["worst_upper_slack"] is None  # lower-bound-only check

    # the arc-length chart needs its anchor pair
    r = client.post("/v1/flatten/jacobian", json={
        "domain": {"kind": "paraboloid", "params": {"kappa": 1.0}},
        "map": "sigma", "n_points": 10})
    assert r.status_code == 422


def test_pushforward_sweep_endpoint():
    r = client.post("/v1/flatten/pushforward", json={
        "domain": {"kind": "paraboloid", "params": {"kappa": 1.0}},
        "n_curves": 10})
    assert r.status_code == 200
    body = r.json()
    assert body["passed"] is True
    assert body["min_margin"] >= -1e-6
    assert body["n_checks"] == 20  # both weights per curve


def test_asymptotics_endpoint():
    r = client.post("/v1/experiments/asymptotics", json={
        "domain": HALFPLANE, "zeta": [0.0, 0.0], "mode": "normal-pair",
        "t0": 0.25, "rungs": 2, "format": "csv"})
    assert r.status_code == 200
    body = r.json()
    assert body["passed"] is True
    rep = report_from_text(body["report"])
    assert rep.metadata["kind"] == "asymptotics"
    assert len(rep.rows) == 3


def test_bound_suite_endpoint():
    r = client.post("/v1/experiments/bounds", json={
        "domain": DISC,
        "pairs": [[[0.5, 0.0], [-0.5, 0.0]], [[0.0, 0.3], [0.6, 0.0]]],
        "c_values": [1.2], "format": "json"})
    assert r.status_code == 200
    body = r.json()
    rep = report_from_text(body["report"])
    assert rep.metadata["ghm_violations"] == "0"
    assert body["metadata"]["ghm_violations"] == "0"


def test_best_constant_endpoint():
    r = client.post("/v1/experiments/best-constant", json={
        "domain": HALFPLANE, "zeta": [0.0, 0.0], "depth": 1.0})
    assert r.status_code == 200
    assert 1.0 < r.json()["c"] <= 1.01
