"""Shared test fixtures: tiny random models and logs for oracle parity."""

from __future__ import annotations

import random

from relaxedalign.logs import SystemLog
from relaxedalign.objects import ObjectMultiset, ObjectUniverse, Role
from relaxedalign.pnid import Marking, ProcessModel, Tpnid, Variable
from relaxedalign.testkit import ISSUE_KINDS, IssueSpec, execution_to_log, generate_run, inject
from relaxedalign.errors import NoRunFound, TargetNotFound

ACTIVITIES = ["alpha", "beta", "gamma", "delta"]


def random_model(rng: random.Random) -> ProcessModel:
    """A small easy-sound net over a case role and sometimes a resource
    role, with optional choice, a correlation place, and silent steps."""
    use_resource = rng.random() < 0.7
    correlate = use_resource and rng.random() < 0.6
    steps = rng.randint(2, 4)

    places = {"pool": ("r",)} if use_resource else {}
    variables = [Variable("c", "c")]
    if use_resource:
        variables.append(Variable("r", "r"))
    arcs = {}
    labels = {}
    for i in range(steps + 1):
        places[f"s{i}"] = ("c",)

    def add_transition(name, label, inputs, outputs):
        labels[name] = label
        for place, seqs in inputs:
            arcs[(place, name)] = seqs
        for place, seqs in outputs:
            arcs[(name, place)] = seqs

    resource_step = rng.randrange(steps) if use_resource else None
    for i in range(steps):
        label = rng.choice(ACTIVITIES) if rng.random() > 0.2 else None
        src, dst = f"s{i}", f"s{i + 1}"
        if i == resource_step and correlate:
            places[f"hold{i}"] = ("c", "r")
            add_transition(
                f"t{i}a",
                label,
                [(src, (("c",),)), ("pool", (("r",),))],
                [(f"hold{i}", (("c", "r"),))],
            )
            add_transition(
                f"t{i}b",
                rng.choice(ACTIVITIES),
                [(f"hold{i}", (("c", "r"),))],
                [(dst, (("c",),)), ("pool", (("r",),))],
            )
        elif i == resource_step:
            add_transition(
                f"t{i}",
                label or rng.choice(ACTIVITIES),
                [(src, (("c",),)), ("pool", (("r",),))],
                [(dst, (("c",),)), ("pool", (("r",),))],
            )
        else:
            add_transition(f"t{i}", label, [(src, (("c",),))], [(dst, (("c",),))])
            if rng.random() < 0.3:
                add_transition(
                    f"t{i}x",
                    rng.choice(ACTIVITIES),
                    [(src, (("c",),))],
                    [(dst, (("c",),))],
                )

    objects = {"c1": ("c", 1)}
    roles = [Role("c", "spontaneous")]
    if use_resource:
        roles.append(Role("r", "expected"))
        objects["r1"] = ("r", 1)
        if rng.random() < 0.5:
            objects["r2"] = ("r", 1)
    universe = ObjectUniverse.build(roles, objects)

    pool_tokens = [("r1",)] if use_resource else []
    if use_resource and "r2" in objects:
        pool_tokens.append(("r2",))
    initial = Marking.of({"s0": [("c1",)], **({"pool": pool_tokens} if use_resource else {})})
    final = Marking.of(
        {f"s{steps}": [("c1",)], **({"pool": pool_tokens} if use_resource else {})}
    )
    net = Tpnid(
        places=frozenset(places),
        transitions=frozenset(labels),
        arcs=tuple(sorted(arcs.items())),
        label=tuple(sorted(labels.items())),
        place_type=tuple(sorted((p, t) for p, t in places.items())),
        variables=tuple(variables),
    )
    return ProcessModel(net=net, initial=initial, final=final, universe=universe)


def random_instance(seed: int) -> tuple[ProcessModel, SystemLog] | None:
    """A model plus a perturbed log of at most six events, or None when the
    dice land on a dead end (caller skips and advances the seed)."""
    rng = random.Random(seed)
    model = random_model(rng)
    try:
        run = generate_run(model, seed, max_firings=8, min_firings=1)
    except NoRunFound:
        return None
    log = execution_to_log(model, run)
    if not log.events or len(log.events) > 6:
        return None
    for _ in range(rng.randint(0, 2)):
        kind = rng.choice([k for k in ISSUE_KINDS if k not in ("mi_p", "in_p")])
        try:
            log = inject(log, IssueSpec(kind=kind), rng.randint(0, 10**6))
        except TargetNotFound:
            continue
    if len(log.events) > 6:
        return None
    return model, log


def single_case_model():
    """s0 -a-> s1 -b-> s2 -c-> s3 with a silent shortcut from s1 to s3."""
    from relaxedalign.pnid import Marking, ProcessModel, Tpnid, Variable
    from relaxedalign.objects import ObjectUniverse, Role

    arcs = {
        ("s0", "ta"): (("c",),),
        ("ta", "s1"): (("c",),),
        ("s1", "tb"): (("c",),),
        ("tb", "s2"): (("c",),),
        ("s2", "tc"): (("c",),),
        ("tc", "s3"): (("c",),),
        ("s1", "skip"): (("c",),),
        ("skip", "s3"): (("c",),),
    }
    net = Tpnid(
        places=frozenset({"s0", "s1", "s2", "s3"}),
        transitions=frozenset({"ta", "tb", "tc", "skip"}),
        arcs=tuple(sorted(arcs.items())),
        label=(("skip", None), ("ta", "a"), ("tb", "b"), ("tc", "c")),
        place_type=(("s0", ("c",)), ("s1", ("c",)), ("s2", ("c",)), ("s3", ("c",))),
        variables=(Variable("c", "c"),),
    )
    universe = ObjectUniverse.build((Role("c"),), {"c1": ("c", 1)})
    return ProcessModel(
        net=net,
        initial=Marking.of({"s0": [("c1",)]}),
        final=Marking.of({"s3": [("c1",)]}),
        universe=universe,
    )


def case_log(*activities):
    from relaxedalign.logs import Event, build_log
    from relaxedalign.objects import ObjectMultiset, ObjectUniverse, Role

    universe = ObjectUniverse.build((Role("c"),), {"c1": ("c", 1)})
    events = [
        Event(f"e{i}", activity, ObjectMultiset.of("c1"))
        for i, activity in enumerate(activities)
    ]
    return build_log(
        universe, events, [(f"e{i}", f"e{i+1}") for i in range(len(events) - 1)]
    )
