"""Sample process: package delivery with deliverers and depot capacity.

Three roles interact: packages (spontaneous, minted per order), deliverers
(expected, on shift), and warehouse depot spots (persistent capacity;
depot w1 has two indistinguishable spots).  Packages are either delivered
at home after ringing, or fall back to a depot; depot orders claim a
deliverer and register a depot slot in parallel.
"""

from __future__ import annotations

from .logs import Event, SystemLog, build_log
from .objects import EXPECTED, PERSISTENT, SPONTANEOUS, ObjectMultiset, ObjectUniverse, Role
from .pnid import Marking, ProcessModel, Tpnid, Variable

ROLE_PACKAGE = "p"
ROLE_DELIVERER = "d"
ROLE_DEPOT = "w"


def delivery_universe(packages: tuple[str, ...] = ()) -> ObjectUniverse:
    objects: dict[str, tuple[str, int]] = {
        "d1": (ROLE_DELIVERER, 1),
        "d2": (ROLE_DELIVERER, 1),
        "w1": (ROLE_DEPOT, 2),
        "w2": (ROLE_DEPOT, 1),
    }
    for name in packages:
        objects[name] = (ROLE_PACKAGE, 1)
    return ObjectUniverse.build(
        roles=(
            Role(ROLE_PACKAGE, SPONTANEOUS),
            Role(ROLE_DELIVERER, EXPECTED),
            Role(ROLE_DEPOT, PERSISTENT),
        ),
        objects=objects,
    )


def delivery_model(packages: tuple[str, ...] = ()) -> ProcessModel:
    p, d, w = ("p",), ("d",), ("w",)
    pd, pw = ("p", "d"), ("p", "w")
    net = Tpnid(
        places=frozenset(
            {
                "free",
                "ordered_home",
                "claim_queue",
                "reg_queue",
                "at_door",
                "assigned",
                "registered",
                "depot_slots",
                "delivered",
                "done",
                "on_duty",
                "off_duty",
            }
        ),
        transitions=frozenset(
            {
                "create",
                "order_home",
                "order_depot",
                "ring",
                "deliver_home",
                "to_depot",
                "claim",
                "register_depot",
                "deliver_depot",
                "collect",
                "destroy",
                "start_shift",
                "end_shift",
            }
        ),
        arcs=(
            (("create", "free"), (("nu_p",),)),
            (("free", "order_home"), (("p",),)),
            (("order_home", "ordered_home"), (("p",),)),
            (("free", "order_depot"), (("p",),)),
            (("order_depot", "claim_queue"), (("p",),)),
            (("order_depot", "reg_queue"), (("p",),)),
            (("ordered_home", "ring"), (("p",),)),
            (("on_duty", "ring"), (("d",),)),
            (("ring", "at_door"), (("p", "d"),)),
            (("at_door", "deliver_home"), (("p", "d"),)),
            (("deliver_home", "done"), (("p",),)),
            (("deliver_home", "on_duty"), (("d",),)),
            (("at_door", "to_depot"), (("p", "d"),)),
            (("to_depot", "assigned"), (("p", "d"),)),
            (("to_depot", "reg_queue"), (("p",),)),
            (("claim_queue", "claim"), (("p",),)),
            (("on_duty", "claim"), (("d",),)),
            (("claim", "assigned"), (("p", "d"),)),
            (("reg_queue", "register_depot"), (("p",),)),
            (("depot_slots", "register_depot"), (("w",),)),
            (("register_depot", "registered"), (("p", "w"),)),
            (("assigned", "deliver_depot"), (("p", "d"),)),
            (("registered", "deliver_depot"), (("p", "w"),)),
            (("deliver_depot", "delivered"), (("p", "w"),)),
            (("deliver_depot", "on_duty"), (("d",),)),
            (("delivered", "collect"), (("p", "w"),)),
            (("collect", "done"), (("p",),)),
            (("collect", "depot_slots"), (("w",),)),
            (("done", "destroy"), (("p",),)),
            (("off_duty", "start_shift"), (("d",),)),
            (("start_shift", "on_duty"), (("d",),)),
            (("on_duty", "end_shift"), (("d",),)),
            (("end_shift", "off_duty"), (("d",),)),
        ),
        label=(
            ("create", "create"),
            ("order_home", "order_home"),
            ("order_depot", "order_depot"),
            ("ring", "ring"),
            ("deliver_home", "deliver_home"),
            ("to_depot", None),
            ("claim", None),
            ("register_depot", "register_depot"),
            ("deliver_depot", "deliver_depot"),
            ("collect", "collect"),
            ("destroy", "destroy"),
            ("start_shift", "start_shift"),
            ("end_shift", "end_shift"),
        ),
        place_type=(
            ("free", p),
            ("ordered_home", p),
            ("claim_queue", p),
            ("reg_queue", p),
            ("at_door", pd),
            ("assigned", pd),
            ("registered", pw),
            ("depot_slots", w),
            ("delivered", pw),
            ("done", p),
            ("on_duty", d),
            ("off_duty", d),
        ),
        variables=(
            Variable("nu_p", ROLE_PACKAGE, fresh=True),
            Variable("p", ROLE_PACKAGE),
            Variable("d", ROLE_DELIVERER),
            Variable("w", ROLE_DEPOT),
        ),
    )
    rest = Marking.of(
        {
            "off_duty": [("d1",), ("d2",)],
            "depot_slots": [("w1",), ("w1",), ("w2",)],
        }
    )
    return ProcessModel(net=net, initial=rest, final=rest, universe=delivery_universe(packages))

# -- scenario logs -------------------------------------------------------------
#
# Four recorded-behavior variants of the delivery process, one per family
# of data quality issue.  Events carry the recording mechanism; the order
# is the closure of per-recorder chains plus per-object traces.

CENTRAL, DELIVERER, WAREHOUSE = "central", "deliverer", "warehouse"


def _scenario(packages, rows, chains) -> SystemLog:
    events = [
        Event(id=i, activity=a, objects=ObjectMultiset.of(*objs), recorder=rec)
        for i, a, objs, rec in rows
    ]
    pairs = set()
    for chain in chains:
        pairs |= {(a, b) for a, b in zip(chain, chain[1:])}
    return build_log(delivery_universe(packages), events, pairs)


def scenario_packages(n: int) -> tuple[str, ...]:
    return {
        1: ("p1", "p2"),
        2: ("p3", "p4", "p5"),
        3: ("p6", "p7"),
        4: ("p8", "p9", "p10"),
    }[n]


def scenario_model(n: int) -> ProcessModel:
    return delivery_model(scenario_packages(n))


def scenario_log(n: int) -> SystemLog:
    """Recorded behavior for scenario ``n``.

    1: a home-delivery ring went unrecorded while a spurious ring was
       logged for a depot-bound package.
    2: a ring was logged that never happened, and another package skipped
       its ring in reality while the deliverer was busy elsewhere.
    3: a delivery was logged without the deliverer and with the wrong
       depot, and a package was handed over between deliverers.
    4: a ring was logged far after the fact, and a deliverer multitasked
       two doorbells in an order the workflow does not allow.
    """
    if n == 1:
        rows = [
            ("e01", "start_shift", ("d1",), DELIVERER),
            ("e02", "create", ("p1",), CENTRAL),
            ("e03", "create", ("p2",), CENTRAL),
            ("e04", "order_home", ("p1",), CENTRAL),
            ("e05", "order_depot", ("p2",), CENTRAL),
            ("e06", "ring", ("p2", "d1"), DELIVERER),
            ("e07", "register_depot", ("p2", "w1"), CENTRAL),
            ("e08", "register_depot", ("p1", "w1"), CENTRAL),
            ("e09", "deliver_depot", ("p2", "d1", "w1"), DELIVERER),
            ("e10", "deliver_depot", ("p1", "d1", "w1"), DELIVERER),
            ("e11", "collect", ("p2", "w1"), WAREHOUSE),
            ("e12", "collect", ("p1", "w1"), WAREHOUSE),
            ("e13", "destroy", ("p2",), CENTRAL),
            ("e14", "destroy", ("p1",), CENTRAL),
            ("e15", "end_shift", ("d1",), DELIVERER),
        ]
        chains = [
            ["e02", "e03", "e04", "e05", "e07", "e08", "e13", "e14"],
            ["e01", "e06", "e09", "e10", "e15"],
            ["e11", "e12"],
            ["e02", "e04", "e08", "e10", "e12", "e14"],
            ["e03", "e05", "e06", "e07", "e09", "e11", "e13"],
            ["e05", "e01"],  # the orders were all in before the shift began
        ]
        return _scenario(scenario_packages(1), rows, chains)
    if n == 2:
        rows = [
            ("b01", "start_shift", ("d1",), DELIVERER),
            ("b02", "create", ("p3",), CENTRAL),
            ("b03", "create", ("p4",), CENTRAL),
            ("b04", "create", ("p5",), CENTRAL),
            ("b05", "order_depot", ("p3",), CENTRAL),
            ("b06", "order_home", ("p4",), CENTRAL),
            ("b07", "order_home", ("p5",), CENTRAL),
            ("b08", "ring", ("p5", "d1"), DELIVERER),
            ("b09", "ring", ("p3", "d1"), DELIVERER),
            ("b10", "deliver_home", ("p5", "d1"), DELIVERER),
            ("b11", "register_depot", ("p4", "w2"), CENTRAL),
            ("b12", "register_depot", ("p3", "w1"), CENTRAL),
            ("b13", "deliver_depot", ("p3", "d1", "w1"), DELIVERER),
            ("b14", "deliver_depot", ("p4", "d1", "w2"), DELIVERER),
            ("b15", "collect", ("p3", "w1"), WAREHOUSE),
            ("b16", "collect", ("p4", "w2"), WAREHOUSE),
            ("b17", "destroy", ("p3",), CENTRAL),
            ("b18", "destroy", ("p4",), CENTRAL),
            ("b19", "destroy", ("p5",), CENTRAL),
            ("b20", "end_shift", ("d1",), DELIVERER),
        ]
        chains = [
            ["b02", "b03", "b04", "b05", "b06", "b07", "b11", "b12", "b17", "b18", "b19"],
            ["b01", "b08", "b09", "b10", "b13", "b14", "b20"],
            ["b15", "b16"],
            ["b02", "b05", "b09", "b12", "b13", "b15", "b17"],
            ["b03", "b06", "b11", "b14", "b16", "b18"],
            ["b04", "b07", "b08", "b10", "b19"],
            ["b07", "b01"],  # the orders were all in before the shift began
        ]
        return _scenario(scenario_packages(2), rows, chains)
    if n == 3:
        rows = [
            ("c01", "start_shift", ("d1",), DELIVERER),
            ("c02", "start_shift", ("d2",), DELIVERER),
            ("c03", "create", ("p6",), CENTRAL),
            ("c04", "create", ("p7",), CENTRAL),
            ("c05", "order_depot", ("p6",), CENTRAL),
            ("c06", "order_depot", ("p7",), CENTRAL),
            ("c07", "register_depot", ("p6", "w2"), CENTRAL),
            ("c08", "register_depot", ("p7", "w1"), CENTRAL),
            ("c09", "end_shift", ("d1",), DELIVERER),
            ("c10", "deliver_depot", ("p6", "w2"), DELIVERER),
            ("c11", "deliver_depot", ("p7", "d2", "w1"), DELIVERER),
            ("c12", "collect", ("p6", "w1"), WAREHOUSE),
            ("c13", "collect", ("p7", "w1"), WAREHOUSE),
            ("c14", "destroy", ("p6",), CENTRAL),
            ("c15", "destroy", ("p7",), CENTRAL),
            ("c16", "end_shift", ("d2",), DELIVERER),
        ]
        chains = [
            ["c03", "c04", "c05", "c06", "c07", "c08", "c14", "c15"],
            ["c01", "c02", "c09", "c10", "c11", "c16"],
            ["c12", "c13"],
            ["c03", "c05", "c07", "c10", "c12", "c14"],
            ["c04", "c06", "c08", "c11", "c13", "c15"],
            ["c08", "c09"],  # registrations done before the first shift ended
        ]
        return _scenario(scenario_packages(3), rows, chains)
    rows = [
        ("d01", "start_shift", ("d1",), DELIVERER),
        ("d02", "create", ("p8",), CENTRAL),
        ("d03", "create", ("p9",), CENTRAL),
        ("d04", "create", ("p10",), CENTRAL),
        ("d05", "order_home", ("p8",), CENTRAL),
        ("d06", "order_home", ("p9",), CENTRAL),
        ("d07", "order_home", ("p10",), CENTRAL),
        ("d08", "deliver_home", ("p8", "d1"), DELIVERER),
        ("d10", "ring", ("p9", "d1"), DELIVERER),
        ("d11", "ring", ("p10", "d1"), DELIVERER),
        ("d12", "deliver_home", ("p10", "d1"), DELIVERER),
        ("d13", "deliver_home", ("p9", "d1"), DELIVERER),
        ("d14", "destroy", ("p8",), CENTRAL),
        ("d15", "destroy", ("p9",), CENTRAL),
        ("d16", "destroy", ("p10",), CENTRAL),
        ("d09", "ring", ("p8", "d1"), DELIVERER),
        ("d17", "end_shift", ("d1",), DELIVERER),
    ]
    chains = [
        ["d02", "d03", "d04", "d05", "d06", "d07", "d14", "d15", "d16"],
        # the ring at p8's door was keyed in at the end of the round, long
        # after it happened and after the parcel was closed out
        ["d01", "d08", "d10", "d11", "d12", "d13", "d09", "d17"],
        ["d02", "d05", "d08", "d14", "d09"],
        ["d03", "d06", "d10", "d13", "d15"],
        ["d04", "d07", "d11", "d12", "d16"],
        ["d07", "d01"],  # the orders were all in before the shift began
        ["d13", "d14"],  # bookkeeping ran after the round was done
        ["d16", "d09"],  # the stale ring entry came after all bookkeeping
    ]
    return _scenario(scenario_packages(4), rows, chains)
