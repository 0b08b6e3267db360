import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from relaxedalign.cli import main
from relaxedalign.delivery import scenario_log, scenario_model
from relaxedalign.documents import log_to_doc, model_to_doc


@pytest.fixture(scope="module")
def doc_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("docs")
    for n in (1, 3):
        (out / f"model{n}.json").write_text(json.dumps(model_to_doc(scenario_model(n))))
        (out / f"log{n}.json").write_text(json.dumps(log_to_doc(scenario_log(n))))
    return out


def run_cli(*args):
    return CliRunner().invoke(main, list(args))


def test_align_command(doc_dir):
    result = run_cli("align", str(doc_dir / "model1.json"), str(doc_dir / "log1.json"))
    assert result.exit_code == 0, result.output
    body = json.loads(result.output)
    assert body["alignment"]["total_cost"].startswith("2+")
    assert body["diagnosis"]["deviations"]


def test_align_relaxed_with_substitution(doc_dir):
    result = run_cli(
        "align",
        str(doc_dir / "model3.json"),
        str(doc_dir / "log3.json"),
        "--relaxed",
        "--substitutable-roles",
        "w",
    )
    assert result.exit_code == 0, result.output
    kinds = {m["kind"] for m in json.loads(result.output)["alignment"]["moves"]}
    assert "substitute_sync" in kinds


def test_align_budget_exit_code(doc_dir):
    result = run_cli(
        "align",
        str(doc_dir / "model1.json"),
        str(doc_dir / "log1.json"),
        "--max-states",
        "1",
    )
    assert result.exit_code == 3


def test_align_parse_error(tmp_path, doc_dir):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    result = run_cli("align", str(doc_dir / "model1.json"), str(bad))
    assert result.exit_code == 1


def test_no_alignment_exit_code(tmp_path):
    from helpers import case_log, single_case_model

    model = single_case_model()
    doc = model_to_doc(model)
    doc["final_marking"] = {"s3": [["c1"], ["c1"]]}
    model_path = tmp_path / "broken.json"
    model_path.write_text(json.dumps(doc))
    log_path = tmp_path / "log.json"
    log_path.write_text(json.dumps(log_to_doc(case_log("a"))))
    result = run_cli("align", str(model_path), str(log_path))
    assert result.exit_code == 2


def test_relax_model_command(doc_dir):
    result = run_cli("relax-model", str(doc_dir / "model1.json"))
    assert result.exit_code == 0
    body = json.loads(result.output)
    assert "bind@at_door" in body["correlation_transitions"]


def test_project_command(doc_dir):
    result = run_cli("project", str(doc_dir / "log1.json"), "--objects", "d1")
    assert result.exit_code == 0
    events = json.loads(result.output)["events"]
    assert {tuple(e["objects"]) for e in events} == {("d1",)}


def test_check_command(tmp_path, doc_dir):
    aligned = run_cli("align", str(doc_dir / "model1.json"), str(doc_dir / "log1.json"))
    alignment_doc = json.loads(aligned.output)["alignment"]
    path = tmp_path / "alignment.json"
    path.write_text(json.dumps(alignment_doc))
    result = run_cli(
        "check", str(doc_dir / "model1.json"), str(doc_dir / "log1.json"), str(path)
    )
    assert result.exit_code == 0
    assert json.loads(result.output)["ok"]


def test_generate_inject_roundtrip(tmp_path, doc_dir):
    generated = run_cli(
        "generate", str(doc_dir / "model1.json"), "--seed", "0",
        "--max-firings", "16", "--min-firings", "10",
        "--recorder", "ring=deliverer",
    )
    assert generated.exit_code == 0, generated.output
    log_path = tmp_path / "generated.json"
    log_path.write_text(generated.output)
    injected = run_cli("inject", str(log_path), "mi_o", "--seed", "3")
    assert injected.exit_code == 0, injected.output
    before = json.loads(generated.output)["events"]
    after = json.loads(injected.output)["events"]
    assert sum(len(e["objects"]) for e in after) == sum(len(e["objects"]) for e in before) - 1


def test_export_dot_command(doc_dir):
    result = run_cli("export-dot", str(doc_dir / "log1.json"), "--color-by", "role")
    assert result.exit_code == 0
    assert result.output.startswith("digraph")


def test_missing_file_is_usage_error():
    result = run_cli("align", "nope.json", "alsono.json")
    assert result.exit_code == 1
