"""Turning an emitted move sequence into an alignment poset.

The final order is the transitive closure of (a) the log order lifted to
moves, kept only where consistent with emission, and (b) the token-flow
causality of the emitted firing sequence.  Both relations are sub-orders
of the emission order, so the closure is always acyclic, and every linear
extension of the causal order replays the same token routing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from ..logs import Event
from ..objects import ObjectMultiset
from ..pnid import Mode, ProcessModel, TransitionFiring, instantiate_arcs
from ..poset import Pair, Poset
from .moves import Alignment, Move


@dataclass(frozen=True)
class Blueprint:
    """A move before ids are assigned."""

    kind: str
    activity: str | None
    event: str | None
    objects: ObjectMultiset | None
    transition: str | None
    mode: Mode | None
    substituted_roles: frozenset[str]
    cost: Fraction


def assemble_alignment(
    work: ProcessModel,
    log_order: Poset,
    events: Mapping[str, Event],
    blueprints: Sequence[Blueprint],
) -> Alignment:
    width = max(3, len(str(len(blueprints) or 1)))
    firing_counter: dict[str, int] = {}
    fragment_counter: dict[str, int] = {}
    per_event: dict[str, list[int]] = {}
    for i, bp in enumerate(blueprints):
        if bp.event is not None:
            per_event.setdefault(bp.event, []).append(i)

    moves: list[Move] = []
    for i, bp in enumerate(blueprints):
        firing = None
        if bp.transition is not None:
            k = firing_counter.get(bp.transition, 0) + 1
            firing_counter[bp.transition] = k
            firing = TransitionFiring(
                id=f"{bp.transition}#{k}", transition=bp.transition, mode=bp.mode
            )
        fragment_id = None
        if bp.event is not None:
            if len(per_event[bp.event]) == 1 and bp.objects == events[bp.event].objects:
                fragment_id = bp.event
            else:
                k = fragment_counter.get(bp.event, 0) + 1
                fragment_counter[bp.event] = k
                fragment_id = f"{bp.event}.{k}"
        moves.append(
            Move(
                id=f"m{i + 1:0{width}d}",
                kind=bp.kind,
                activity=bp.activity,
                event=bp.event,
                fragment_id=fragment_id,
                objects=bp.objects,
                firing=firing,
                substituted_roles=bp.substituted_roles,
                cost=bp.cost,
            )
        )

    pairs = _order_pairs(work, log_order, moves)
    order = Poset.from_pairs([m.id for m in moves], pairs)
    total = sum((m.cost for m in moves), Fraction(0))
    return Alignment(tuple(moves), order, total)


def _order_pairs(work: ProcessModel, log_order: Poset, moves: Sequence[Move]) -> set[Pair]:
    pairs: set[Pair] = set()
    for i, mi in enumerate(moves):
        if mi.event is None:
            continue
        for mj in moves[i + 1 :]:
            if mj.event is None or mj.event == mi.event:
                continue
            if log_order.lt(mi.event, mj.event):
                pairs.add((mi.id, mj.id))
    net = work.net
    pools: dict[tuple[str, tuple[str, ...]], list[str | None]] = {}
    for place, token, count in work.initial.tokens:
        pools.setdefault((place, token), []).extend([None] * count)
    for m in moves:
        if m.firing is None:
            continue
        binding = m.firing.mode.get()
        for place, token in instantiate_arcs(net, net.inputs(m.firing.transition), binding):
            producers = pools.get((place, token), [])
            producer = producers.pop(0) if producers else None
            if producer is not None:
                pairs.add((producer, m.id))
        for place, token in instantiate_arcs(net, net.outputs(m.firing.transition), binding):
            pools.setdefault((place, token), []).append(m.id)
    return pairs
