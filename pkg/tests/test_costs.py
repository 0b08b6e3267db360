from fractions import Fraction

import pytest

from relaxedalign.alignment.costs import CostParams, move_cost_relaxed, move_cost_standard
from relaxedalign.alignment.moves import Move
from relaxedalign.objects import ObjectMultiset
from relaxedalign.pnid import Mode, TransitionFiring

EPS = Fraction(1, 1024)


def firing_of(size):
    binding = tuple((f"v{i}", f"o{i}") for i in range(size))
    return TransitionFiring(id="t#1", transition="t", mode=Mode(binding))


def sync_move(size):
    return Move(
        id="m1",
        kind="relaxed_sync",
        activity="a",
        event="e1",
        fragment_id="e1.1",
        objects=ObjectMultiset.of(*(f"o{i}" for i in range(size))),
        firing=firing_of(size),
    )


def model_move(size, activity="a"):
    return Move(id="m1", kind="relaxed_model", activity=activity, firing=firing_of(size))


def log_move(size):
    return Move(
        id="m1",
        kind="relaxed_log",
        activity="a",
        event="e1",
        fragment_id="e1.1",
        objects=ObjectMultiset.of(*(f"o{i}" for i in range(size))),
    )


def test_standard_costs():
    params = CostParams.standard()
    assert move_cost_standard(Move(id="m", kind="sync", activity="a", event="e",
                                   objects=ObjectMultiset.of("x"), firing=firing_of(1)), params) == 0
    assert move_cost_standard(Move(id="m", kind="log", activity="a", event="e",
                                   objects=ObjectMultiset.of("x")), params) == 1
    assert move_cost_standard(Move(id="m", kind="model", activity="a", firing=firing_of(1)), params) == 1
    assert move_cost_standard(Move(id="m", kind="model", activity=None, firing=firing_of(1)), params) == EPS * EPS


def test_standard_costs_weighted():
    params = CostParams.standard(log_weight=Fraction(10), model_weight=Fraction(3))
    assert move_cost_standard(Move(id="m", kind="log", activity="a", event="e",
                                   objects=ObjectMultiset.of("x")), params) == 10
    assert move_cost_standard(Move(id="m", kind="model", activity="a", firing=firing_of(2)), params) == 3


# The closed-form table for the three branches at the stated pairs.
TABLE = [
    (3, 3),
    (3, 2),
    (2, 1),
    (1, 1),
]


@pytest.mark.parametrize("var_count,size", TABLE)
def test_relaxed_cost_correlation_branch(var_count, size):
    mv = Move(id="m", kind="correlation_silent", activity=None, firing=firing_of(size))
    assert move_cost_relaxed(mv, CostParams.relaxed(), var_count) == EPS * EPS


@pytest.mark.parametrize("var_count,size", TABLE)
def test_relaxed_cost_deviating_branch(var_count, size):
    expected = Fraction(size) + (var_count - size) * EPS
    assert move_cost_relaxed(model_move(size), CostParams.relaxed(), var_count) == expected
    assert move_cost_relaxed(log_move(size), CostParams.relaxed(), size) == Fraction(size)


@pytest.mark.parametrize("var_count,size", TABLE)
def test_relaxed_cost_sync_branch(var_count, size):
    expected = (var_count - size) * EPS
    assert move_cost_relaxed(sync_move(size), CostParams.relaxed(), var_count) == expected


def test_relaxed_cost_silent_moves_cost_epsilon_squared():
    mv = model_move(2, activity=None)
    assert move_cost_relaxed(mv, CostParams.relaxed(), 2) == EPS * EPS


def test_relaxed_substitute_adds_one_per_slot():
    mv = Move(
        id="m",
        kind="substitute_sync",
        activity="a",
        event="e",
        fragment_id="e.1",
        objects=ObjectMultiset.of("x", "y"),
        firing=firing_of(2),
        substituted_roles=frozenset({"r"}),
    )
    got = move_cost_relaxed(mv, CostParams.relaxed(), 3, substituted_slots=1)
    assert got == 1 + EPS


def test_epsilon_validation():
    with pytest.raises(ValueError):
        CostParams(epsilon=Fraction(2))
    with pytest.raises(ValueError):
        CostParams(epsilon=Fraction(0))
    with pytest.raises(ValueError):
        CostParams(log_weight=Fraction(0))
