import json
from fractions import Fraction

import pytest
from fastapi.testclient import TestClient

from hypervc.service import app

client = TestClient(app)


def post(path, payload, status=200):
    resp = client.post(path, json=payload)
    assert resp.status_code == status, resp.text
    return resp.json()


def test_health():
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok"}


def test_gap_endpoint():
    out = post("/gap", {"r": 2, "k": 3})
    assert out["config"]["r"] == 2
    assert out["report"]["lp"] == "3"
    assert out["report"]["certValue"] == "3"
    assert out["report"]["vc"] == "4"
    assert out["instance"]["k"] == 3
    assert out["cert"]["objective"] == "3"
    # solve=False skips the report.
    out = post("/gap", {"r": 1, "k": 3, "solve": False})
    assert "report" not in out or out["report"] is None


def test_gap_domain_error_and_budget():
    out = post("/gap", {"r": 0, "k": 3}, status=400)
    assert "r must" in out["detail"]
    out = post("/gap", {"r": 5, "k": 9, "solve": False}, status=413)
    assert "budget" in out["detail"]


def simple_hypergraph():
    return {
        "k": 2,
        "parts": [["a", "b"], ["c", "d"]],
        "weights": {"a": "2"},
        "edges": [["a", "c"], ["b", "d"]],
    }


def test_solve_endpoint():
    out = post("/solve", {"hypergraph": simple_hypergraph(), "mode": "all", "instanceId": "demo"})
    rep = out["report"]
    assert rep["instance"] == "demo"
    assert rep["lp"] == "2"
    assert rep["vc"] == "2"
    assert rep["vcOverLp"] == "1"
    assert out["lpSolution"]["objective"] == "2"


def test_solve_rejects_malformed():
    out = post("/solve", {"hypergraph": {"k": 2, "parts": [], "edges": []}}, status=400)
    assert "invalid instance" in out["detail"] or "parts" in out["detail"]


def test_validate_and_check_endpoints():
    out = post("/hypergraph/validate", {"hypergraph": simple_hypergraph()})
    assert out["violations"] == []
    out = post(
        "/hypergraph/check",
        {"hypergraph": simple_hypergraph(), "vertices": ["a", "b"], "mode": "cover"},
    )
    assert out["ok"] is True and out["weight"] == "3"
    out = post(
        "/hypergraph/check",
        {"hypergraph": simple_hypergraph(), "vertices": ["b"], "mode": "cover"},
    )
    assert out["ok"] is False and out["witness"] == ["a", "c"]
    out = post(
        "/hypergraph/check",
        {"hypergraph": simple_hypergraph(), "vertices": ["ghost"], "mode": "cover"},
        status=400,
    )
    assert "unknown vertex" in out["detail"]


def test_setfam_endpoints():
    family = {"n": 3, "sets": [[1, 2]]}
    out = post("/setfam/measure", {"family": family, "p": "3/10"})
    assert out["measure"] == "63/1000"
    out = post("/setfam/measure", {"family": family, "p": "0.3"}, status=400)
    assert "decimal" in out["detail"]

    out = post("/setfam/shift", {"family": {"n": 3, "sets": [[2, 3]]}, "i": 1, "j": 3})
    assert out["shifted"]["sets"] == [[1, 2]]
    assert out["fixpoint"] is False
    out = post("/setfam/shift", {"family": {"n": 3, "sets": [[2], [2, 3]]}})
    assert out["shifted"]["sets"] == [[1], [1, 2]]
    out = post("/setfam/shift", {"family": family, "i": 1}, status=400)
    assert "both i and j" in out["detail"]

    out = post(
        "/setfam/cross",
        {"families": [{"n": 3, "sets": [[1]]}, {"n": 3, "sets": [[2]]}], "t": 1},
    )
    assert out["crossIntersecting"] is False
    assert out["witness"] == [[1], [2]]

    out = post(
        "/setfam/density-witness",
        {"family": {"n": 3, "sets": [[1], [1, 2]]}, "q": "1/2", "t": 1},
    )
    assert out["allDense"] is True
    assert out["rBySet"] == {"1": 0, "1,2": 0}

    out = post(
        "/setfam/balls-and-bins",
        {
            "families": [
                {"n": 6, "sets": [[], [1]]},
                {"n": 6, "sets": [[], [1]]},
            ],
            "qs": ["1/2", "1/2"],
            "t": 2,
        },
    )
    assert out["blocked"] is False
    assert len(out["intersection"]) <= 1

    out = post("/setfam/chernoff-t", {"eps": "1/2", "delta": "1/10"})
    assert out["t"] == 232


def test_pcp_endpoints():
    gen = post(
        "/pcp/generate",
        {"layerCount": 2, "varsPerLayer": 2, "rangeSizes": [2, 2], "seed": 3},
    )
    csp = gen["csp"]
    planted = gen["plantedLabeling"]
    assert set(planted) == {"l0v0", "l0v1", "l1v0", "l1v1"}
    best = post("/pcp/best", {"csp": csp, "layerA": 0, "layerB": 1})
    assert best["fraction"] == "1"

    dense = post(
        "/pcp/generate",
        {"layerCount": 4, "varsPerLayer": 2, "rangeSizes": [2, 2, 2, 2], "seed": 3},
    )
    out = post(
        "/pcp/density",
        {
            "csp": dense["csp"],
            "delta": "1/2",
            "layers": [0, 1, 2, 3],
            "subsets": dense["csp"]["layers"],
        },
    )
    assert out["found"] is True and out["fraction"] == "1"


def test_reduce_completeness_decode_pipeline():
    gen = post(
        "/pcp/generate",
        {"layerCount": 2, "varsPerLayer": 1, "rangeSizes": [2, 2], "seed": 0},
    )
    red = post("/reduce", {"csp": gen["csp"], "k": 3, "r": 1, "eps": "1/10"})
    inst = red["instance"]
    assert inst["params"] == {"k": 3, "eps": "1/10", "r": 1}
    assert inst["hypergraph"]["k"] == 4

    comp = post(
        "/reduce/completeness",
        {"instance": inst, "labeling": gen["plantedLabeling"]},
    )
    assert comp["nonDummyWeight"] == "7/30"
    assert comp["weight"] == "247/30"  # 7/30 plus four dummies of weight 2

    dec = post(
        "/decode",
        {
            "instance": inst,
            "independentSet": comp["independentSet"],
            "seed": 0,
            "layerPair": [0, 1],
        },
    )
    assert dec["report"]["satisfiedFraction"] == "1"
    assert dec["report"]["labels"] == {
        k: v for k, v in gen["plantedLabeling"].items()
    }


def test_reduce_rejects_bad_parameters():
    gen = post(
        "/pcp/generate",
        {"layerCount": 2, "varsPerLayer": 1, "rangeSizes": [2, 2], "seed": 0},
    )
    out = post("/reduce", {"csp": gen["csp"], "k": 2, "r": 1, "eps": "1/10"}, status=400)
    assert "k must" in out["detail"]


def test_report_endpoint():
    out = post(
        "/report",
        {"instances": [{"id": "one", "hypergraph": simple_hypergraph()}]},
    )
    assert len(out["rows"]) == 1
    row = out["rows"][0]
    assert row["instance"] == "one"
    assert row["lp"] == "2" and row["vc"] == "2"
    # Weak duality: vc/lp >= 1 always.
    num, _, den = row["vcOverLp"].partition("/")
    assert Fraction(int(num), int(den or 1)) >= 1
