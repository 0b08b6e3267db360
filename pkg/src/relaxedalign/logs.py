"""System logs as posets of recorded events, projections, and relaxation."""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import BadPartition, CycleError
from .objects import ObjectMultiset, ObjectUniverse
from .poset import Pair, Poset


@dataclass(frozen=True)
class Event:
    """A recorded event.  Relaxation fragments keep a pointer to the
    original event id and its full object multiset."""

    id: str
    activity: str
    objects: ObjectMultiset
    recorder: str | None = None
    origin: str | None = None
    projection_of: ObjectMultiset | None = None

    def __post_init__(self) -> None:
        if self.objects.is_empty():
            raise ValueError(f"event {self.id!r} has no objects")
        if self.projection_of is not None and not (
            self.objects.leq(self.projection_of) and self.objects != self.projection_of
        ):
            raise ValueError(f"fragment {self.id!r} must carry a strict sub-multiset")


@dataclass(frozen=True)
class SystemLog:
    events: tuple[Event, ...]
    order: Poset
    universe: ObjectUniverse

    def __post_init__(self) -> None:
        ids = [e.id for e in self.events]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate event ids")
        if set(ids) != set(self.order.elements):
            raise ValueError("order elements and event ids differ")
        for e in self.events:
            for name in e.objects.support():
                if not self.universe.has_object(name):
                    raise ValueError(f"event {e.id!r} uses undeclared object {name!r}")

    def event_map(self) -> dict[str, Event]:
        return {e.id: e for e in self.events}

    def recorders(self) -> frozenset[str]:
        return frozenset(e.recorder for e in self.events if e.recorder is not None)

    def multi_recorder(self) -> bool:
        return len(self.recorders()) > 1


def build_log(
    universe: ObjectUniverse,
    events: Sequence[Event],
    pairs: Iterable[Pair] = (),
) -> SystemLog:
    order = Poset.from_pairs([e.id for e in events], pairs)
    return SystemLog(tuple(events), order, universe)


def object_chain_pairs(events: Sequence[Event]) -> set[Pair]:
    """Order pairs chaining, per distinguishable object, the events that
    involve it, in listing order.  Objects with universe multiplicity > 1
    still get a chain only if the caller includes them in ``events`` order;
    this helper is purely positional."""
    by_object: dict[str, list[str]] = {}
    for e in events:
        for name in e.objects.support():
            by_object.setdefault(name, []).append(e.id)
    pairs: set[Pair] = set()
    for chain in by_object.values():
        for a, b in zip(chain, chain[1:]):
            pairs.add((a, b))
    return pairs


def project_log(log: SystemLog, objs: ObjectMultiset) -> SystemLog:
    """Events keep min(objects, objs); events with empty intersection drop;
    order restricts to the survivors."""
    kept: list[Event] = []
    for e in log.events:
        shared = e.objects.min(objs)
        if shared.is_empty():
            continue
        kept.append(replace(e, objects=shared, projection_of=None, origin=e.origin))
    order = log.order.project([e.id for e in kept])
    return SystemLog(tuple(kept), order, log.universe)


def relax_event(log: SystemLog, event_id: str, partition: Sequence[ObjectMultiset]) -> SystemLog:
    """Replace one event by pairwise-incomparable fragments, one per part.

    Each fragment inherits the parent's order against events sharing at
    least one of its objects (the per-object traces stay intact); pure
    cross-object pairs are dropped, which is exactly what the relaxed-log
    properties permit.
    """
    events = log.event_map()
    if event_id not in events:
        raise BadPartition(f"unknown event {event_id!r}")
    parent = events[event_id]
    if len(partition) < 2 or any(p.is_empty() for p in partition):
        raise BadPartition("partition needs at least two non-empty parts")
    total = ObjectMultiset.of()
    for part in partition:
        total = total.add(part)
    if total != parent.objects:
        raise BadPartition("parts must sum to the event's objects")

    fragments = [
        Event(
            id=f"{event_id}.{i}",
            activity=parent.activity,
            objects=part,
            recorder=parent.recorder,
            origin=parent.origin or event_id,
            projection_of=parent.objects,
        )
        for i, part in enumerate(partition)
    ]
    new_events = [e for e in log.events if e.id != event_id] + fragments
    pairs: set[Pair] = {
        (a, b) for a, b in log.order.order if a != event_id and b != event_id
    }
    for frag in fragments:
        names = frag.objects.support()
        for a, b in log.order.order:
            if a == event_id and not events[b].objects.support().isdisjoint(names):
                pairs.add((frag.id, b))
            if b == event_id and not events[a].objects.support().isdisjoint(names):
                pairs.add((a, frag.id))
    order = Poset.from_pairs([e.id for e in new_events], pairs)
    return SystemLog(tuple(new_events), order, log.universe)


def _trace_signature(log: SystemLog, obj: str) -> tuple[list[str], set[tuple[str, str]]] | None:
    """Activities of the events involving ``obj`` plus their order, keyed by
    the originating event id so fragments compare against their parents."""
    proj = project_log(log, ObjectMultiset.of(obj))
    keys: dict[str, str] = {}
    for e in proj.events:
        key = e.origin or e.id
        if key in keys:
            return None  # two fragments of one parent share an object: invalid
        keys[e.id] = key
    labels = sorted((keys[e.id], e.activity) for e in proj.events)
    order = {(keys[a], keys[b]) for a, b in proj.order.order}
    return [f"{k}:{a}" for k, a in labels], order


def is_relaxed_version(original: SystemLog, candidate: SystemLog) -> bool:
    """Check the two relaxed-log properties: per-object traces are intact
    and each event's fragments partition its objects."""
    if original.universe != candidate.universe:
        return False

    # Partition property: group candidate events by originating event.
    groups: dict[str, list[Event]] = {}
    for e in candidate.events:
        groups.setdefault(e.origin or e.id, []).append(e)
    originals = original.event_map()
    if set(groups) != set(originals):
        return False
    for origin_id, frags in groups.items():
        parent = originals[origin_id]
        total = ObjectMultiset.of()
        for f in frags:
            if f.activity != parent.activity:
                return False
            total = total.add(f.objects)
        if total != parent.objects:
            return False

    # Per-object trace property.
    for obj in sorted(original.universe.objects.support()):
        sig_o = _trace_signature(original, obj)
        sig_c = _trace_signature(candidate, obj)
        if sig_o is None or sig_c is None or sig_o != sig_c:
            return False
    return True


def derive_order_from_timestamps(
    stamped: Mapping[str, Fraction | float | int], tolerance: Fraction | float | int = 0
) -> Poset:
    """Order: a < b iff t(b) - t(a) > tolerance; ties within tolerance stay
    incomparable.  The raw relation is already transitive for nonnegative
    tolerance, but closure is applied (and checked) defensively."""
    pairs: set[Pair] = set()
    items = sorted(stamped.items(), key=lambda kv: (kv[1], kv[0]))
    for i, (a, ta) in enumerate(items):
        for b, tb in items[i + 1 :]:
            if tb - ta > tolerance:
                pairs.add((a, b))
    try:
        return Poset.from_pairs(stamped.keys(), pairs)
    except CycleError as exc:  # cannot happen for a consistent timestamp rule
        raise CycleError(f"inconsistent timestamps: {exc}") from exc
