"""Independent re-checking of alignment properties.

The verifier reconstructs both projections of an alignment (onto log
events and onto transition firings) and re-checks the definitions from
scratch: the log side must reproduce the log (or a relaxed version of
it), the model side must be an execution poset reaching the final
marking, every move must be a potential match, and matched pairs must
not contradict the two orders.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

from ..logs import Event, SystemLog, is_relaxed_version
from ..objects import ObjectUniverse
from ..pnid import ExecutionPoset, ProcessModel, run_reaches_final
from ..poset import Poset
from ..relaxed_model import build_relaxed_model
from .matching import potential_match
from .moves import Alignment, LOG_SIDED, MODEL_SIDED, Move, SYNC_FAMILY
from .search import merge_universes


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    violations: tuple[str, ...]


def fragment_log_view(
    alignment: Alignment, log: SystemLog, universe: ObjectUniverse | None = None
) -> SystemLog:
    """The alignment's projection onto its log side, as a system log whose
    events are the consumed fragments."""
    universe = universe or log.universe
    events = log.event_map()
    frag_events: dict[str, Event] = {}
    move_to_frag: dict[str, str] = {}
    for m in alignment.moves:
        if m.kind not in LOG_SIDED:
            continue
        if m.event is None or m.objects is None or m.fragment_id is None:
            raise ValueError(f"move {m.id} lacks log-side data")
        parent = events[m.event]
        whole = m.fragment_id == m.event
        frag_events[m.fragment_id] = Event(
            id=m.fragment_id,
            activity=m.activity,
            objects=m.objects,
            recorder=parent.recorder,
            origin=None if whole else m.event,
            projection_of=None if whole else parent.objects,
        )
        move_to_frag[m.id] = m.fragment_id
    pairs = {
        (move_to_frag[a], move_to_frag[b])
        for a, b in alignment.order.order
        if a in move_to_frag and b in move_to_frag
    }
    order = Poset(frozenset(frag_events), frozenset(pairs))
    return SystemLog(tuple(frag_events.values()), order, universe)


def alignment_run(alignment: Alignment) -> ExecutionPoset:
    """The alignment's projection onto its transition firings."""
    firing_moves = [m for m in alignment.moves if m.kind in MODEL_SIDED]
    ids = {m.id: m.firing.id for m in firing_moves}
    pairs = {
        (ids[a], ids[b]) for a, b in alignment.order.order if a in ids and b in ids
    }
    run = Poset(frozenset(ids.values()), frozenset(pairs))
    return ExecutionPoset(run, tuple(m.firing for m in firing_moves))


def verify_alignment_report(
    alignment: Alignment,
    log: SystemLog,
    model: ProcessModel,
    relaxed: bool = False,
    *,
    strict_final: bool = False,
) -> VerificationReport:
    violations: list[str] = []
    universe = merge_universes(model.universe, log.universe)
    base = replace(model, universe=universe)
    if relaxed:
        relaxed_model = build_relaxed_model(base)
        work = relaxed_model.model
        correlation = relaxed_model.correlation_transitions
    else:
        work = base
        correlation = frozenset()
    net = work.net
    labels = net.labels()
    events = log.event_map()

    # Move shape and matching conditions.
    for m in alignment.moves:
        if m.firing is not None and m.firing.transition not in net.transitions:
            violations.append(f"{m.id}: unknown transition {m.firing.transition!r}")
            continue
        if m.kind == "correlation_silent" and m.firing.transition not in correlation:
            violations.append(f"{m.id}: not a correlation transition")
        if not relaxed and m.kind not in ("sync", "log", "model"):
            violations.append(f"{m.id}: {m.kind} move in a regular alignment")
        if m.event is not None and m.event not in events:
            violations.append(f"{m.id}: unknown event {m.event!r}")
            continue
        if m.kind in SYNC_FAMILY:
            probe = Event(
                id=m.fragment_id or m.event,
                activity=m.activity,
                objects=m.objects,
                recorder=None,
            )
            if not potential_match(probe, m.firing, net, universe, m.substituted_roles):
                violations.append(f"{m.id}: event and firing are not potential matches")
        if m.kind in ("log", "relaxed_log") and m.activity != events[m.event].activity:
            violations.append(f"{m.id}: activity differs from its event")
        if m.kind in ("model", "relaxed_model") and labels.get(m.firing.transition) != m.activity:
            violations.append(f"{m.id}: label differs from its transition")

    # Log projection: the log itself, or a valid relaxed version of it.
    try:
        view = fragment_log_view(alignment, replace(log, universe=universe), universe)
    except Exception as exc:
        violations.append(f"log projection is malformed: {exc}")
        view = None
    if view is not None:
        original = replace(log, universe=universe)
        if relaxed:
            if not is_relaxed_version(original, view):
                violations.append("log projection is not a relaxed version of the log")
        else:
            same_events = {e.id for e in view.events} == set(events) and all(
                view.event_map()[i].objects == events[i].objects for i in events
            )
            if not same_events:
                violations.append("log projection does not reproduce the log events")
            elif not set(log.order.order) <= set(view.order.order):
                violations.append("log projection loses log order")

    # Model projection: an execution poset from the initial to the final marking.
    run = alignment_run(alignment)
    ignorable = frozenset()
    if not strict_final:
        observed = {n for e in log.events for n in e.objects.support()}
        ignorable = frozenset(
            n
            for n in universe.objects.support()
            if n not in observed and n not in universe.persistent_objects()
        )
    if not run_reaches_final(work, run, ignorable=ignorable):
        violations.append("model projection is not an execution poset to the final marking")

    # Matched pairs must not contradict the two orders.
    sync_moves = [m for m in alignment.moves if m.kind in SYNC_FAMILY]
    run_order = {(a, b) for a, b in run.run.order}
    move_firing = {m.id: m.firing.id for m in alignment.moves if m.firing is not None}
    for mi in sync_moves:
        for mj in sync_moves:
            if mi.id == mj.id or mi.event == mj.event:
                continue
            if log.order.lt(mi.event, mj.event) and (
                (move_firing[mj.id], move_firing[mi.id]) in run_order
            ):
                violations.append(
                    f"order contradiction between {mi.id} and {mj.id}"
                )

    return VerificationReport(ok=not violations, violations=tuple(violations))


def verify_alignment(
    alignment: Alignment,
    log: SystemLog,
    model: ProcessModel,
    relaxed: bool = False,
    *,
    strict_final: bool = False,
) -> bool:
    return verify_alignment_report(
        alignment, log, model, relaxed, strict_final=strict_final
    ).ok
