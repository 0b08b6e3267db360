import json
from fractions import Fraction

import pytest

from relaxedalign.delivery import scenario_log, scenario_model
from relaxedalign.documents import (
    alignment_from_doc,
    alignment_to_doc,
    format_fraction,
    log_from_doc,
    log_to_doc,
    model_from_doc,
    model_to_doc,
    parse_fraction,
    relaxed_model_to_doc,
)
from relaxedalign.errors import DocumentError
from relaxedalign.relaxed_model import build_relaxed_model


def test_fraction_formatting():
    assert format_fraction(Fraction(0)) == "0"
    assert format_fraction(Fraction(2)) == "2"
    assert format_fraction(Fraction(1, 512)) == "1/512"
    assert format_fraction(Fraction(3) + Fraction(2, 1024)) == "3+1/512"
    assert parse_fraction("3+1/512") == Fraction(3) + Fraction(1, 512)
    assert parse_fraction("7") == 7
    assert parse_fraction("1/1024") == Fraction(1, 1024)
    with pytest.raises(DocumentError):
        parse_fraction("x/y")


def test_model_document_roundtrip():
    model = scenario_model(1)
    doc = model_to_doc(model)
    assert doc["version"] == 1
    back = model_from_doc(json.loads(json.dumps(doc)))
    assert back.net == model.net
    assert back.initial == model.initial
    assert back.final == model.final
    assert back.universe == model.universe


def test_log_document_roundtrip():
    log = scenario_log(1)
    doc = log_to_doc(log)
    back = log_from_doc(json.loads(json.dumps(doc)))
    assert back.events == log.events
    assert back.order == log.order
    assert back.universe == log.universe


def test_log_document_timestamp_order():
    log = scenario_log(1)
    doc = log_to_doc(log)
    del doc["order"]
    for i, entry in enumerate(doc["events"]):
        entry["timestamp"] = i * 10
    back = log_from_doc(doc)
    ids = [e["id"] for e in doc["events"]]
    assert all(back.order.lt(a, b) for a, b in zip(ids, ids[1:]))


def test_version_required():
    model = scenario_model(1)
    doc = model_to_doc(model)
    doc.pop("version")
    with pytest.raises(DocumentError):
        model_from_doc(doc)


def test_order_references_must_exist():
    log = scenario_log(1)
    doc = log_to_doc(log)
    doc["order"].append(["e01", "nosuch"])
    with pytest.raises(DocumentError):
        log_from_doc(doc)


def test_alignment_document_roundtrip(scenario1):
    result = scenario1.relaxed
    doc = alignment_to_doc(result)
    assert doc["total_cost"] == format_fraction(result.total_cost)
    back = alignment_from_doc(json.loads(json.dumps(doc)))
    assert back.total_cost == result.total_cost
    assert [m.kind for m in back.moves] == [m.kind for m in result.moves]
    assert back.order == result.order


def test_relaxed_model_document_lists_correlation_net():
    relaxed = build_relaxed_model(scenario_model(1))
    doc = relaxed_model_to_doc(relaxed)
    assert sorted(relaxed.correlation_transitions) == doc["correlation_transitions"]
    assert doc["projection_index"]["ring|d"] == {"base": "ring", "roles": ["d"]}
    back = model_from_doc(doc)
    assert back.net.transitions == relaxed.model.net.transitions
