import pytest

from relaxedalign.delivery import delivery_model
from relaxedalign.objects import ObjectMultiset, ObjectUniverse, Role
from relaxedalign.pnid import (
    Marking,
    Mode,
    ProcessModel,
    Tpnid,
    TransitionFiring,
    Variable,
    fire,
    is_enabled,
    replay,
)
from relaxedalign.relaxed_model import build_relaxed_model, language_inclusion_check


def firing(fid, transition, **binding):
    return TransitionFiring(id=fid, transition=transition, mode=Mode.of(**binding))


def test_projected_copies_per_role_subset():
    relaxed = build_relaxed_model(delivery_model(("p1",)))
    names = relaxed.model.net.transitions
    for expected in [
        "ring|d",
        "ring|p",
        "deliver_home|d",
        "deliver_home|p",
        "deliver_depot|d",
        "deliver_depot|p",
        "deliver_depot|w",
        "deliver_depot|d+p",
        "deliver_depot|d+w",
        "deliver_depot|p+w",
    ]:
        assert expected in names, expected
    # single-role transitions are not copied
    assert not any(t.startswith("create|") for t in names)


def test_correlation_net_per_multi_role_place():
    relaxed = build_relaxed_model(delivery_model(("p1",)))
    assert relaxed.correlation_transitions == {
        "bind@at_door",
        "unbind@at_door",
        "bind@assigned",
        "unbind@assigned",
        "bind@registered",
        "unbind@registered",
        "bind@delivered",
        "unbind@delivered",
    }
    labels = relaxed.model.net.labels()
    assert all(labels[t] is None for t in relaxed.correlation_transitions)


def test_projected_labels_match_base():
    relaxed = build_relaxed_model(delivery_model(("p1",)))
    labels = relaxed.model.net.labels()
    for t, (base, _roles) in relaxed.projection_index:
        assert labels[t] == labels[base]
    bases = {base for _, (base, _) in relaxed.projection_index}
    assert bases <= relaxed.base.net.transitions


def test_single_role_net_needs_no_relaxation():
    universe = ObjectUniverse.build(
        roles=(Role("c"),), objects={"c1": ("c", 1)}
    )
    net = Tpnid(
        places=frozenset({"s0", "s1"}),
        transitions=frozenset({"t"}),
        arcs=((("s0", "t"), (("c",),)), (("t", "s1"), (("c",),))),
        label=(("t", "go"),),
        place_type=(("s0", ("c",)), ("s1", ("c",))),
        variables=(Variable("c", "c"),),
    )
    model = ProcessModel(
        net=net,
        initial=Marking.of({"s0": [("c1",)]}),
        final=Marking.of({"s1": [("c1",)]}),
        universe=universe,
    )
    relaxed = build_relaxed_model(model)
    assert relaxed.model.net.transitions == net.transitions
    assert relaxed.correlation_transitions == frozenset()


def test_bind_then_unbind_is_marking_noop():
    model = delivery_model(("p1",))
    relaxed = build_relaxed_model(model).model
    marking = relaxed.initial.add([("at_door|p", ("p1",)), ("at_door|d", ("d1",))])
    bound = fire(relaxed, marking, firing("f1", "bind@at_door", p="p1", d="d1"))
    assert bound.at("at_door") == {("p1", "d1"): 1}
    unbound = fire(relaxed, bound, firing("f2", "unbind@at_door", p="p1", d="d1"))
    assert unbound == marking


def test_partial_behaviors_compose_through_shadows():
    """A projected ring for the deliverer, a projected ring for the package,
    a bind, and then the full home delivery form a legal firing sequence."""
    model = delivery_model(("p1",))
    relaxed = build_relaxed_model(model).model
    marking = replay(
        ProcessModel(relaxed.net, relaxed.initial, relaxed.final, relaxed.universe),
        [
            firing("f1", "start_shift", d="d1"),
            firing("f2", "create", nu_p="p1"),
            firing("f3", "order_home", p="p1"),
            firing("f4", "ring|d", d="d1"),
            firing("f5", "ring|p", p="p1"),
            firing("f6", "bind@at_door", p="p1", d="d1"),
            firing("f7", "deliver_home", p="p1", d="d1"),
        ],
    )
    assert marking.at("done") == {("p1",): 1}


def test_markings_unchanged():
    model = delivery_model(("p1",))
    relaxed = build_relaxed_model(model)
    assert relaxed.model.initial == model.initial
    assert relaxed.model.final == model.final


def test_language_inclusion_bounded():
    assert language_inclusion_check(delivery_model(("p1",)), depth=6)


def test_language_inclusion_trivial_net():
    universe = ObjectUniverse.build(roles=(Role("c"),), objects={"c1": ("c", 1)})
    net = Tpnid(
        places=frozenset({"s0"}),
        transitions=frozenset(),
        arcs=(),
        label=(),
        place_type=(("s0", ("c",)),),
        variables=(Variable("c", "c"),),
    )
    model = ProcessModel(
        net=net,
        initial=Marking.of({"s0": [("c1",)]}),
        final=Marking.of({"s0": [("c1",)]}),
        universe=universe,
    )
    assert language_inclusion_check(model, depth=4)


def test_var_count_of_projection_is_base_count():
    relaxed = build_relaxed_model(delivery_model(("p1",)))
    assert relaxed.var_count("deliver_depot|d") == 3
    assert relaxed.var_count("ring|p") == 2
    assert relaxed.var_count("ring") == 2
    assert relaxed.var_count("bind@at_door") == 2
