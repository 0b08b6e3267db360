"""Session-wide fixtures: scenario alignments are expensive, compute once."""

from __future__ import annotations

import time
from dataclasses import dataclass

import pytest

from relaxedalign import Alignment, align, relaxed_align
from relaxedalign.delivery import scenario_log, scenario_model
from relaxedalign.logs import SystemLog
from relaxedalign.pnid import ProcessModel

SUBSTITUTABLE = {3: ("w",)}


@dataclass
class ScenarioRun:
    number: int
    model: ProcessModel
    log: SystemLog
    regular: Alignment
    regular_seconds: float
    relaxed: Alignment
    relaxed_seconds: float
    substitutable: tuple[str, ...]


def _run_scenario(n: int) -> ScenarioRun:
    model, log = scenario_model(n), scenario_log(n)
    subs = SUBSTITUTABLE.get(n, ())
    t0 = time.perf_counter()
    regular = align(log, model)
    regular_seconds = time.perf_counter() - t0
    t0 = time.perf_counter()
    relaxed = relaxed_align(log, model, substitutable_roles=subs)
    relaxed_seconds = time.perf_counter() - t0
    return ScenarioRun(
        n, model, log, regular, regular_seconds, relaxed, relaxed_seconds, subs
    )


@pytest.fixture(scope="session")
def scenario1() -> ScenarioRun:
    return _run_scenario(1)


@pytest.fixture(scope="session")
def scenario2() -> ScenarioRun:
    return _run_scenario(2)


@pytest.fixture(scope="session")
def scenario3() -> ScenarioRun:
    return _run_scenario(3)


@pytest.fixture(scope="session")
def scenario4() -> ScenarioRun:
    return _run_scenario(4)
