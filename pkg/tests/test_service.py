"""HTTP service endpoints, exercised in-process."""

import json

import pytest
from fastapi.testclient import TestClient

import tabsynth
from tabsynth.service import create_app

from conftest import write_config


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as c:
        yield c


TOY_TABLE = {
    "header": ["department", "total deputies", "chairs", "budget"],
    "rows": [
        ["state", "18", "2", "120.5"],
        ["treasury", "24", "3", "210.75"],
        ["justice", "15", "1", "98.2"],
        ["interior", "24", "2", "150"],
        ["education", "12", "4", "87.25"],
    ],
}


class TestHealth:
    def test_health_reports_version(self, client):
        body = client.get("/v1/health").json()
        assert body == {"status": "ok", "version": tabsynth.__version__}


class TestExec:
    def test_scalar_execution(self, client):
        resp = client.post("/v1/exec", json={
            "table": TOY_TABLE,
            "program": "select department from w order by `total deputies` desc limit 1",
            "family": "sql",
        })
        assert resp.status_code == 200
        body = resp.json()
        assert body["kind"] == "cells"
        assert body["cells"] == ["treasury"]
        assert body["highlighted"]
        assert "scalar" not in body  # exclude_none keeps the payload tight

    def test_boolean_execution(self, client):
        resp = client.post("/v1/exec", json={
            "table": TOY_TABLE,
            "program": "most_eq { all_rows ; chairs ; 2 }",
            "family": "logic",
        })
        assert resp.status_code == 200
        assert resp.json()["boolean"] is False

    def test_domain_errors_map_to_400(self, client):
        resp = client.post("/v1/exec", json={
            "table": TOY_TABLE,
            "program": "select ghost from w",
            "family": "sql",
        })
        assert resp.status_code == 400
        assert resp.json()["detail"].startswith("MissingColumnError:")

    def test_parse_errors_map_to_400(self, client):
        resp = client.post("/v1/exec", json={
            "table": TOY_TABLE, "program": "select", "family": "sql",
        })
        assert resp.status_code == 400
        assert resp.json()["detail"].startswith("ParseError:")

    def test_unknown_family_is_schema_level(self, client):
        resp = client.post("/v1/exec", json={
            "table": TOY_TABLE, "program": "x", "family": "prolog",
        })
        assert resp.status_code == 422

    def test_extra_fields_are_rejected(self, client):
        resp = client.post("/v1/exec", json={
            "table": TOY_TABLE, "program": "select department from w",
            "family": "sql", "verbose": True,
        })
        assert resp.status_code == 422

    def test_bad_table_shape_is_a_domain_error(self, client):
        resp = client.post("/v1/exec", json={
            "table": {"header": ["a", "b"], "rows": [["1"]]},
            "program": "select a from w",
            "family": "sql",
        })
        assert resp.status_code == 400
        assert resp.json()["detail"].startswith("MalformedInputError:")
        assert "expected 2" in resp.json()["detail"]


class TestRealize:
    def test_rule_realization(self, client):
        resp = client.post("/v1/realize", json={
            "program": "select department from w order by `total deputies` desc limit 1",
            "family": "sql",
        })
        assert resp.status_code == 200
        assert resp.json() == {
            "text": "Which department has the most total deputies?",
            "source": "rule",
            "fidelity_ok": True,
        }


@pytest.fixture(scope="module")
def service_corpus(client, tmp_path_factory):
    root = tmp_path_factory.mktemp("service")
    cfg_path = write_config(root / "cfg.json", root / "corpus.jsonl",
                            samples_per_table=6, branches=["table_only"])
    request = json.loads(cfg_path.read_text(encoding="utf-8"))
    resp = client.post("/v1/generate", json=request)
    assert resp.status_code == 200, resp.text
    return root / "corpus.jsonl", resp.json()


class TestCorpusEndpoints:
    def test_generate_returns_stats(self, service_corpus):
        path, stats = service_corpus
        assert path.exists()
        assert stats["total"] > 0
        assert stats["by_branch"].keys() == {"table_only"}
        assert sum(stats["by_task"].values()) == stats["total"]

    def test_validate_endpoint(self, client, service_corpus):
        path, _ = service_corpus
        resp = client.post("/v1/validate", json={"path": str(path)})
        assert resp.status_code == 200
        body = resp.json()
        assert body["ok"] is True
        assert body["violations"] == []
        assert body["total"] > 0

    def test_stats_endpoint_matches_generate(self, client, service_corpus):
        path, stats = service_corpus
        resp = client.post("/v1/stats", json={"path": str(path)})
        assert resp.status_code == 200
        body = resp.json()
        for key in ("total", "by_task", "by_branch", "by_family", "by_label"):
            assert body[key] == stats[key]

    def test_missing_corpus_is_an_io_error(self, client, tmp_path):
        resp = client.post("/v1/stats", json={"path": str(tmp_path / "nope.jsonl")})
        assert resp.status_code == 400
        assert "io error" in resp.json()["detail"]

    def test_bad_generate_config_is_a_domain_error(self, client, tmp_path):
        resp = client.post("/v1/generate", json={
            "tables": str(tmp_path / "missing"),
            "templates": str(tmp_path / "missing.txt"),
            "output": str(tmp_path / "out.jsonl"),
        })
        assert resp.status_code == 400
        assert resp.json()["detail"].startswith("ConfigError:")
