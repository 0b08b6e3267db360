import pytest

from relaxedalign.documents import alignment_to_doc, log_to_doc
from relaxedalign.dot import export_dot
from relaxedalign.errors import DocumentError
from relaxedalign.delivery import scenario_log


def test_alignment_dot_marks_deviations(scenario1):
    doc = alignment_to_doc(scenario1.regular)
    doc.update(log_to_doc(scenario1.log))  # supply role info for color-by-role
    doc["moves"] = alignment_to_doc(scenario1.regular)["moves"]
    dot = export_dot(doc, color_by="kind")
    assert dot.startswith("digraph")
    model_moves = [m for m in doc["moves"] if m["kind"] == "model" and m["activity"] == "ring"]
    assert len(model_moves) == 1
    assert f'"{model_moves[0]["id"]}"' in dot
    assert "penwidth=2" in dot  # deviating moves stand out
    assert dot.count("->") == len(doc["order"])


def test_log_dot_and_color_by_role():
    doc = log_to_doc(scenario_log(1))
    dot = export_dot(doc, color_by="role")
    assert "ring^{d1,p2}" in dot
    assert dot.count("->") == len(doc["order"])


def test_empty_alignment_gives_empty_body():
    dot = export_dot({"version": 1, "moves": [], "order": []})
    assert "->" not in dot


def test_unknown_color_key():
    with pytest.raises(DocumentError):
        export_dot({"moves": [], "order": []}, color_by="nope")


def test_document_without_content_rejected():
    with pytest.raises(DocumentError):
        export_dot({"version": 1})
