"""Ground-truth behavior generation and quality-issue injection.

Runs are produced by a seeded randomized search through the net; issue
injection perturbs a log in one of the six missing/incorrect ways
(event, object association, position) so diagnosis pipelines can be
exercised against a known ground truth.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

from .errors import BadPartition, CycleError, NoRunFound, TargetNotFound
from .logs import Event, SystemLog
from .objects import ObjectMultiset
from .pnid import (
    ExecutionPoset,
    Marking,
    ProcessModel,
    TransitionFiring,
    enabled_modes,
    fire,
    instantiate_arcs,
)
from .poset import Pair, Poset

ISSUE_KINDS = ("mi_e", "in_e", "mi_o", "in_o", "mi_p", "in_p")


@dataclass(frozen=True)
class IssueSpec:
    """Which issue to inject and where.  The target matches by event id, by
    activity, or by an involved object's role; kinds with parameters (the
    object to drop or the replacement name) take them explicitly or leave
    them to the seeded picker."""

    kind: str
    event_id: str | None = None
    activity: str | None = None
    role: str | None = None
    object_name: str | None = None
    replacement: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in ISSUE_KINDS:
            raise ValueError(f"unknown issue kind {self.kind!r}")


def generate_run(
    model: ProcessModel,
    seed: int,
    max_firings: int,
    min_firings: int = 0,
) -> ExecutionPoset:
    """A reproducible execution poset from the initial to the final marking.

    With coinciding initial and final markings and ``min_firings`` zero the
    empty run is returned; ask for ``min_firings`` >= 1 to force activity.
    Runs come from randomized bounded walks with backtracking; each seed
    gives the same run.
    """
    if min_firings == 0 and model.initial == model.final:
        return ExecutionPoset(Poset(frozenset()), ())
    rng = random.Random(seed)
    sequence = None
    for _attempt in range(80):
        sequence = _bounded_walk(model, rng, max_firings, min_firings, budget=3000)
        if sequence is not None:
            break
    if sequence is None:
        raise NoRunFound(f"no run of length <= {max_firings} reaches the final marking")
    firings = tuple(
        TransitionFiring(id=f"f{i + 1:02d}", transition=f.transition, mode=f.mode)
        for i, f in enumerate(sequence)
    )
    order = causal_order(model, firings)
    return ExecutionPoset(order, firings)


def _bounded_walk(
    model: ProcessModel,
    rng: random.Random,
    max_firings: int,
    min_firings: int,
    budget: int,
) -> list[TransitionFiring] | None:
    seen: set[tuple[Marking, int]] = set()
    steps = 0

    def search(marking: Marking, path: list[TransitionFiring]) -> list[TransitionFiring] | None:
        nonlocal steps
        if len(path) >= min_firings and marking == model.final:
            return list(path)
        if len(path) >= max_firings or steps >= budget:
            return None
        options: list[TransitionFiring] = []
        for t in sorted(model.net.transitions):
            for mode in enabled_modes(model, marking, t):
                options.append(TransitionFiring(id=f"f{len(path)}", transition=t, mode=mode))
        rng.shuffle(options)
        for firing in options:
            after = fire(model, marking, firing)
            key = (after, len(path) + 1)
            if key in seen:
                continue
            seen.add(key)
            steps += 1
            found = search(after, path + [firing])
            if found is not None:
                return found
            if steps >= budget:
                return None
        return None

    return search(model.initial, [])


def causal_order(model: ProcessModel, firings: Sequence[TransitionFiring]) -> Poset:
    """Token-flow causality of a firing sequence (FIFO token routing)."""
    net = model.net
    pairs: set[Pair] = set()
    pools: dict[tuple[str, tuple[str, ...]], list[str | None]] = {}
    for place, token, count in model.initial.tokens:
        pools.setdefault((place, token), []).extend([None] * count)
    for f in firings:
        binding = f.mode.get()
        for place, token in instantiate_arcs(net, net.inputs(f.transition), binding):
            producers = pools.get((place, token), [])
            producer = producers.pop(0) if producers else None
            if producer is not None:
                pairs.add((producer, f.id))
        for place, token in instantiate_arcs(net, net.outputs(f.transition), binding):
            pools.setdefault((place, token), []).append(f.id)
    return Poset.from_pairs([f.id for f in firings], pairs)


def execution_to_log(
    model: ProcessModel,
    run: ExecutionPoset,
    recorder_by_activity: Mapping[str, str] | None = None,
) -> SystemLog:
    """Recorded view of a run: silent firings vanish, each visible firing
    becomes an event (label, involved objects) keeping the run's order."""
    labels = model.net.labels()
    visible = [f for f in run.firings if labels[f.transition] is not None]
    events: list[Event] = []
    id_map: dict[str, str] = {}
    minted: dict[str, str] = {}
    vs = model.net.vars()
    for i, f in enumerate(sorted(visible, key=lambda f: f.id)):
        eid = f"e{i + 1:02d}"
        id_map[f.id] = eid
        activity = labels[f.transition]
        recorder = (recorder_by_activity or {}).get(activity)
        for var, obj in f.mode.binding:
            if not model.universe.has_object(obj):
                minted[obj] = vs[var].role
        events.append(
            Event(id=eid, activity=activity, objects=f.involved(model.net), recorder=recorder)
        )
    universe = model.universe.with_objects(minted)
    projected = run.run.project(id_map.keys())
    pairs = {(id_map[a], id_map[b]) for a, b in projected.order}
    order = Poset(frozenset(id_map.values()), frozenset(pairs))
    return SystemLog(tuple(events), order, universe)


def _resolve_targets(log: SystemLog, spec: IssueSpec) -> list[Event]:
    matches = []
    for e in log.events:
        if spec.event_id is not None and e.id != spec.event_id:
            continue
        if spec.activity is not None and e.activity != spec.activity:
            continue
        if spec.role is not None and spec.role not in {
            log.universe.role_of(n) for n in e.objects.support()
        }:
            continue
        matches.append(e)
    if not matches:
        raise TargetNotFound(f"no event matches {spec}")
    return matches


def inject(log: SystemLog, spec: IssueSpec, seed: int) -> SystemLog:
    """Apply one quality issue to the log; identical seeds give identical
    outputs."""
    rng = random.Random(seed)
    if spec.kind == "mi_e":
        return _inject_missing_event(log, spec, rng)
    if spec.kind == "in_e":
        return _inject_incorrect_event(log, spec, rng)
    if spec.kind == "mi_o":
        return _inject_missing_object(log, spec, rng)
    if spec.kind == "in_o":
        return _inject_incorrect_object(log, spec, rng)
    if spec.kind == "mi_p":
        return _inject_missing_position(log, spec, rng)
    return _inject_incorrect_position(log, spec, rng)


def _inject_missing_event(log: SystemLog, spec: IssueSpec, rng: random.Random) -> SystemLog:
    target = rng.choice(_resolve_targets(log, spec))
    events = tuple(e for e in log.events if e.id != target.id)
    return SystemLog(events, log.order.project([e.id for e in events]), log.universe)


def _inject_incorrect_event(log: SystemLog, spec: IssueSpec, rng: random.Random) -> SystemLog:
    target = rng.choice(_resolve_targets(log, spec))
    copy_id = f"{target.id}x"
    copy = replace(target, id=copy_id)
    pairs = set(log.order.order)
    # The copy sits parallel to the original: same predecessors/successors.
    for a, b in log.order.order:
        if a == target.id:
            pairs.add((copy_id, b))
        if b == target.id:
            pairs.add((a, copy_id))
    order = Poset(frozenset(log.order.elements | {copy_id}), frozenset(pairs))
    return SystemLog(log.events + (copy,), order, log.universe)


def _inject_missing_object(log: SystemLog, spec: IssueSpec, rng: random.Random) -> SystemLog:
    candidates = [e for e in _resolve_targets(log, spec) if len(e.objects.support()) >= 2]
    if not candidates:
        raise TargetNotFound("missing-object injection needs an event with >= 2 objects")
    target = rng.choice(candidates)
    if spec.object_name is not None:
        dropped = spec.object_name
    else:
        pool = sorted(target.objects.support())
        if spec.role is not None:
            pool = [n for n in pool if log.universe.role_of(n) == spec.role] or pool
        dropped = rng.choice(pool)
    counts = target.objects.counts()
    counts.pop(dropped, None)
    if not counts:
        raise TargetNotFound("cannot drop the only object of an event")
    new_event = replace(target, objects=ObjectMultiset.from_counts(counts))
    events = tuple(new_event if e.id == target.id else e for e in log.events)
    return SystemLog(events, log.order, log.universe)


def _inject_incorrect_object(log: SystemLog, spec: IssueSpec, rng: random.Random) -> SystemLog:
    targets = _resolve_targets(log, spec)
    rng.shuffle(targets)
    for target in targets:
        pool = sorted(target.objects.support())
        if spec.object_name is not None:
            pool = [n for n in pool if n == spec.object_name]
        if spec.role is not None:
            pool = [n for n in pool if log.universe.role_of(n) == spec.role]
        for original in pool:
            role = log.universe.role_of(original)
            replacements = sorted(
                n
                for n in log.universe.objects.support()
                if log.universe.role_of(n) == role and n not in target.objects.support()
            )
            if spec.replacement is not None:
                replacements = [n for n in replacements if n == spec.replacement]
            if not replacements:
                continue
            substitute = rng.choice(replacements)
            counts = target.objects.counts()
            counts[substitute] = counts.pop(original)
            new_event = replace(target, objects=ObjectMultiset.from_counts(counts))
            events = tuple(new_event if e.id == target.id else e for e in log.events)
            return SystemLog(events, log.order, log.universe)
    raise TargetNotFound("no same-role substitute available")


def _inject_missing_position(log: SystemLog, spec: IssueSpec, rng: random.Random) -> SystemLog:
    """Erase an order pair, preferably across recorders: the
    cross-mechanism clock uncertainty case."""
    targets = _resolve_targets(log, spec)
    events = log.event_map()
    covers = sorted(log.order.covering_relation())
    rng.shuffle(covers)
    target_ids = {e.id for e in targets}

    def attempt(require_cross_recorder: bool) -> SystemLog | None:
        for a, b in covers:
            if a not in target_ids and b not in target_ids:
                continue
            if require_cross_recorder and (
                events[a].recorder is None or events[a].recorder == events[b].recorder
            ):
                continue
            reduced = set(log.order.covering_relation()) - {(a, b)}
            candidate = Poset.from_pairs(log.order.elements, reduced)
            if not candidate.lt(a, b):
                return SystemLog(log.events, candidate, log.universe)
        return None

    result = attempt(require_cross_recorder=True) or attempt(require_cross_recorder=False)
    if result is None:
        raise TargetNotFound("no erasable order pair at the target")
    return result


def _inject_incorrect_position(log: SystemLog, spec: IssueSpec, rng: random.Random) -> SystemLog:
    """Swap the target across one covering pair that shares an object."""
    targets = _resolve_targets(log, spec)
    events = log.event_map()
    covers = sorted(log.order.covering_relation())
    rng.shuffle(covers)
    target_ids = {e.id for e in targets}
    for a, b in covers:
        if a not in target_ids and b not in target_ids:
            continue
        if events[a].objects.support().isdisjoint(events[b].objects.support()):
            continue
        swapped = (set(log.order.covering_relation()) - {(a, b)}) | {(b, a)}
        try:
            candidate = Poset.from_pairs(log.order.elements, swapped)
        except CycleError:
            continue
        return SystemLog(log.events, candidate, log.universe)
    raise TargetNotFound("no swappable covering pair at the target")
