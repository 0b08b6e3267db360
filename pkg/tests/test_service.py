from fastapi.testclient import TestClient

from relaxedalign.delivery import scenario_log, scenario_model
from relaxedalign.documents import log_to_doc, model_to_doc, parse_fraction
from relaxedalign.service import app

client = TestClient(app)


def docs(n=1):
    return model_to_doc(scenario_model(n)), log_to_doc(scenario_log(n))


def test_health():
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "ok"


def test_align_endpoint_regular():
    model_doc, log_doc = docs(1)
    response = client.post("/align", json={"model": model_doc, "log": log_doc})
    assert response.status_code == 200
    body = response.json()
    assert parse_fraction(body["alignment"]["total_cost"]) > 2
    kinds = sorted({m["kind"] for m in body["alignment"]["moves"]})
    assert kinds == ["log", "model", "sync"]
    assert body["diagnosis"]["deviations"]
    assert body["diagnosis"]["trust"]


def test_align_endpoint_relaxed_with_options():
    model_doc, log_doc = docs(3)
    response = client.post(
        "/align",
        json={
            "model": model_doc,
            "log": log_doc,
            "options": {"relaxed": True, "substitutable_roles": ["w"]},
        },
    )
    assert response.status_code == 200
    kinds = {m["kind"] for m in response.json()["alignment"]["moves"]}
    assert "substitute_sync" in kinds


def test_align_endpoint_budget_exceeded():
    model_doc, log_doc = docs(1)
    response = client.post(
        "/align",
        json={"model": model_doc, "log": log_doc, "options": {"max_states": 1}},
    )
    assert response.status_code == 400
    assert response.json()["detail"]["code"] == "budget_exceeded"


def test_align_endpoint_document_error():
    response = client.post("/align", json={"model": {"version": 2}, "log": {"version": 1}})
    assert response.status_code == 422


def test_relax_model_endpoint():
    model_doc, _ = docs(1)
    response = client.post("/relax-model", json={"model": model_doc})
    assert response.status_code == 200
    body = response.json()["model"]
    assert "bind@at_door" in body["correlation_transitions"]
    assert any(t["id"] == "ring|p" for t in body["transitions"])


def test_project_endpoint_model_roles():
    model_doc, _ = docs(1)
    response = client.post("/project", json={"document": model_doc, "roles": ["p"]})
    assert response.status_code == 200
    names = {t["id"] for t in response.json()["document"]["transitions"]}
    assert "ring|p" in names and "start_shift" not in names


def test_project_endpoint_log_objects():
    _, log_doc = docs(1)
    response = client.post("/project", json={"document": log_doc, "objects": ["d1"]})
    assert response.status_code == 200
    events = response.json()["document"]["events"]
    assert all(e["objects"] == ["d1"] for e in events)
    assert [e["activity"] for e in events].count("deliver_depot") == 2


def test_check_endpoint_roundtrip():
    model_doc, log_doc = docs(1)
    aligned = client.post("/align", json={"model": model_doc, "log": log_doc}).json()
    response = client.post(
        "/check",
        json={
            "model": model_doc,
            "log": log_doc,
            "alignment": aligned["alignment"],
            "relaxed": False,
        },
    )
    assert response.status_code == 200
    assert response.json() == {"ok": True, "violations": []}


def test_check_endpoint_flags_tampering():
    model_doc, log_doc = docs(1)
    aligned = client.post("/align", json={"model": model_doc, "log": log_doc}).json()
    doc = aligned["alignment"]
    victim = next(m for m in doc["moves"] if m["kind"] == "sync")
    victim["objects"] = victim["objects"] + victim["objects"]
    response = client.post(
        "/check",
        json={"model": model_doc, "log": log_doc, "alignment": doc, "relaxed": False},
    )
    assert response.status_code == 200
    body = response.json()
    assert not body["ok"] and body["violations"]


def test_generate_and_inject_endpoints():
    model_doc, _ = docs(1)
    generated = client.post(
        "/generate",
        json={"model": model_doc, "seed": 0, "max_firings": 16, "min_firings": 10},
    )
    assert generated.status_code == 200
    log_doc = generated.json()["document"]
    assert log_doc["events"]
    injected = client.post(
        "/inject", json={"log": log_doc, "kind": "mi_e", "seed": 1}
    )
    assert injected.status_code == 200
    assert len(injected.json()["document"]["events"]) == len(log_doc["events"]) - 1


def test_inject_endpoint_unknown_target():
    model_doc, log_doc = docs(1)
    response = client.post(
        "/inject", json={"log": log_doc, "kind": "mi_e", "seed": 1, "activity": "nope"}
    )
    assert response.status_code == 409


def test_export_dot_endpoint():
    _, log_doc = docs(1)
    response = client.post("/export-dot", json={"document": log_doc})
    assert response.status_code == 200
    assert response.json()["dot"].startswith("digraph")
