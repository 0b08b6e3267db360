"""Potential-match predicate between recorded events and transition firings."""

from __future__ import annotations

from typing import Iterable

from ..logs import Event
from ..objects import ObjectMultiset, ObjectUniverse
from ..pnid import Tpnid, TransitionFiring


def split_by_role(
    objs: ObjectMultiset, universe: ObjectUniverse
) -> dict[str, ObjectMultiset]:
    parts: dict[str, dict[str, int]] = {}
    for name, count in objs.entries:
        parts.setdefault(universe.role_of(name), {})[name] = count
    return {r: ObjectMultiset.from_counts(c) for r, c in parts.items()}


def potential_match(
    event: Event,
    firing: TransitionFiring,
    net: Tpnid,
    universe: ObjectUniverse,
    substituted_roles: Iterable[str] = (),
) -> bool:
    """Whether the event and the firing may refer to the same occurrence.

    Without substituted roles: the activity equals the transition label
    and the object multisets are equal.  With substituted roles R: objects
    outside R are equal, objects inside R are disjoint with equal
    cardinality per role.
    """
    labels = net.labels()
    if labels.get(firing.transition) != event.activity:
        return False
    log_objs = event.objects
    model_objs = firing.involved(net)
    roles = frozenset(substituted_roles)
    if not roles:
        return log_objs == model_objs
    log_parts = split_by_role(log_objs, universe)
    model_parts = split_by_role(model_objs, universe)
    for role in set(log_parts) | set(model_parts):
        lp = log_parts.get(role, ObjectMultiset.of())
        mp = model_parts.get(role, ObjectMultiset.of())
        if role in roles:
            if lp.total() != mp.total():
                return False
            if lp.support() & mp.support():
                return False
            if lp.is_empty():
                return False
        elif lp != mp:
            return False
    return True
