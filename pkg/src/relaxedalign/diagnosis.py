"""Interpreting alignments: congruence triples, deviation classification,
and local trust statistics.

Classification is heuristic and advisory: each deviating move gets one
record whose candidate list may name several plausible quality-issue
categories when the rules overlap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .alignment.moves import Alignment, LOG_FAMILY, MODEL_FAMILY, Move, SYNC_FAMILY
from .alignment.search import merge_universes
from .logs import SystemLog
from .objects import ObjectMultiset, ObjectUniverse
from .pnid import ProcessModel

MISSING_EVENT = "missing_event"
INCORRECT_EVENT = "incorrect_event"
MISSING_OBJECT = "missing_object"
INCORRECT_OBJECT = "incorrect_object"
MISSING_POSITION = "missing_position"
INCORRECT_POSITION = "incorrect_position"
UNCLASSIFIED = "unclassified"

CATEGORIES = (
    MISSING_EVENT,
    INCORRECT_EVENT,
    MISSING_OBJECT,
    INCORRECT_OBJECT,
    MISSING_POSITION,
    INCORRECT_POSITION,
    UNCLASSIFIED,
)

ISSUE_BY_CATEGORY = {
    MISSING_EVENT: "mi_e",
    INCORRECT_EVENT: "in_e",
    MISSING_OBJECT: "mi_o",
    INCORRECT_OBJECT: "in_o",
    MISSING_POSITION: "mi_p",
    INCORRECT_POSITION: "in_p",
}
CATEGORY_BY_ISSUE = {v: k for k, v in ISSUE_BY_CATEGORY.items()}


@dataclass(frozen=True)
class CongruenceTriple:
    log_side: str | None
    model_side: str | None

    def __post_init__(self) -> None:
        if self.log_side is None and self.model_side is None:
            raise ValueError("a congruence triple needs at least one side")


@dataclass(frozen=True)
class DeviationRecord:
    move_id: str
    category: str
    candidates: tuple[str, ...]
    agreeing_roles: frozenset[str]
    disagreeing_roles: frozenset[str]
    likelihood_rank: int

    def issue_codes(self) -> tuple[str, ...]:
        return tuple(ISSUE_BY_CATEGORY[c] for c in self.candidates if c in ISSUE_BY_CATEGORY)


@dataclass(frozen=True)
class TrustEntry:
    role: str
    activity: str
    sync_moves: int = 0
    relaxed_sync_moves: int = 0
    substitute_moves: int = 0
    log_moves: int = 0
    model_moves: int = 0
    synced_slots: int = 0
    total_slots: int = 0

    @property
    def trust_score(self) -> Fraction:
        if self.total_slots == 0:
            return Fraction(1)
        return Fraction(self.synced_slots, self.total_slots)


@dataclass(frozen=True)
class TrustReport:
    entries: tuple[TrustEntry, ...]

    def entry(self, role: str, activity: str) -> TrustEntry | None:
        for e in self.entries:
            if e.role == role and e.activity == activity:
                return e
        return None


def congruence_of(alignment: Alignment) -> tuple[CongruenceTriple, ...]:
    """One triple per log fragment and per non-silent firing; silent and
    correlation moves carry no observable behavior and are excluded."""
    triples: list[CongruenceTriple] = []
    for m in alignment.moves:
        if m.kind in SYNC_FAMILY:
            triples.append(CongruenceTriple(m.fragment_id, m.firing.id))
        elif m.kind in LOG_FAMILY:
            triples.append(CongruenceTriple(m.fragment_id, None))
        elif m.kind in MODEL_FAMILY and m.activity is not None and m.kind != "correlation_silent":
            triples.append(CongruenceTriple(None, m.firing.id))
    return tuple(triples)


def _activity_roles(
    activity: str | None, model: ProcessModel, universe: ObjectUniverse, fallback: ObjectMultiset | None
) -> frozenset[str]:
    if activity is not None:
        vs = model.net.vars()
        roles: set[str] = set()
        for t, label in model.net.label:
            if label == activity:
                roles |= {vs[v].role for v in model.net.transition_vars(t)}
        if roles:
            return frozenset(roles)
    if fallback is not None:
        return frozenset(universe.role_of(n) for n in fallback.support())
    return frozenset()


def _present_roles(objs: ObjectMultiset | None, universe: ObjectUniverse) -> frozenset[str]:
    if objs is None:
        return frozenset()
    return frozenset(universe.role_of(n) for n in objs.support())


def classify(
    alignment: Alignment, log: SystemLog, model: ProcessModel
) -> list[DeviationRecord]:
    universe = merge_universes(model.universe, log.universe)
    events = log.event_map()

    def firing_objects(m: Move) -> ObjectMultiset:
        return ObjectMultiset.of(*m.firing.mode.get().values())

    def record(m: Move, candidates: list[str]) -> DeviationRecord:
        if m.kind in LOG_FAMILY or m.kind in SYNC_FAMILY:
            present = _present_roles(m.objects, universe)
        else:
            present = _present_roles(firing_objects(m), universe)
        activity_roles = _activity_roles(
            m.activity, model, universe, m.objects if m.objects is not None else firing_objects(m)
        )
        activity_roles = activity_roles | present
        if m.kind == "substitute_sync":
            agreeing = activity_roles - m.substituted_roles
            disagreeing = frozenset(m.substituted_roles)
        elif m.kind in LOG_FAMILY:
            agreeing = activity_roles - present
            disagreeing = frozenset(present)
        else:
            agreeing = frozenset(present)
            disagreeing = activity_roles - present
        category = candidates[0] if len(candidates) == 1 else UNCLASSIFIED
        if not candidates:
            category = UNCLASSIFIED
        return DeviationRecord(
            move_id=m.id,
            category=category,
            candidates=tuple(candidates),
            agreeing_roles=agreeing,
            disagreeing_roles=disagreeing,
            likelihood_rank=len(agreeing),
        )

    records: list[DeviationRecord] = []
    log_moves = [m for m in alignment.moves if m.kind in LOG_FAMILY]
    model_moves = [
        m for m in alignment.moves if m.kind in ("model", "relaxed_model") and m.activity is not None
    ]
    silent_moves = [
        m for m in alignment.moves if m.kind in ("model", "relaxed_model") and m.activity is None
    ]
    sync_moves = [m for m in alignment.moves if m.kind in SYNC_FAMILY]

    paired_in_p: set[str] = set()
    paired_in_o: set[str] = set()

    # Same activity and same objects on both sides at different positions.
    for lm in log_moves:
        for mm in model_moves:
            if mm.id in paired_in_p:
                continue
            if lm.activity == mm.activity and lm.objects == firing_objects(mm):
                paired_in_p |= {lm.id, mm.id}
                break

    # Same activity and role, different objects: swapped identities.
    for lm in log_moves:
        if lm.id in paired_in_p:
            continue
        lm_roles = _present_roles(lm.objects, universe)
        for mm in model_moves:
            if mm.id in paired_in_p or mm.id in paired_in_o:
                continue
            mm_objs = firing_objects(mm)
            if (
                lm.activity == mm.activity
                and lm_roles == _present_roles(mm_objs, universe)
                and lm.objects.support().isdisjoint(mm_objs.support())
                and len(lm.objects) == len(mm_objs)
            ):
                paired_in_o |= {lm.id, mm.id}
                break

    # Relaxed syncs that dropped a role entirely: the parallel model move
    # for that role points at a missing object association.
    missing_object_moves: set[str] = set()
    for mm in model_moves:
        if mm.id in paired_in_p or mm.id in paired_in_o:
            continue
        mm_roles = _present_roles(firing_objects(mm), universe)
        for sm in sync_moves:
            if sm.kind != "relaxed_sync" or sm.activity != mm.activity:
                continue
            parent = events.get(sm.event)
            if parent is None:
                continue
            parent_roles = _present_roles(parent.objects, universe)
            if mm_roles and mm_roles.isdisjoint(parent_roles):
                missing_object_moves.add(mm.id)
                break

    for m in alignment.moves:
        if m.kind == "substitute_sync":
            records.append(record(m, [INCORRECT_OBJECT]))
        elif m.kind in LOG_FAMILY:
            if m.id in paired_in_p:
                records.append(record(m, [INCORRECT_POSITION]))
            elif m.id in paired_in_o:
                records.append(record(m, [INCORRECT_OBJECT]))
            else:
                records.append(record(m, [INCORRECT_EVENT]))
        elif m.kind in ("model", "relaxed_model") and m.activity is not None:
            if m.id in paired_in_p:
                records.append(record(m, [INCORRECT_POSITION]))
            elif m.id in paired_in_o:
                records.append(record(m, [INCORRECT_OBJECT]))
            elif m.id in missing_object_moves:
                records.append(record(m, [MISSING_OBJECT, MISSING_EVENT]))
            else:
                records.append(record(m, [MISSING_EVENT]))

    # A relaxed synchronization whose event misses a whole role of its
    # activity points at a dropped object association, whether or not the
    # model chose to move the missing role's objects at all.
    for m in sync_moves:
        if m.kind != "relaxed_sync":
            continue
        parent = events.get(m.event)
        if parent is None:
            continue
        activity_roles = _activity_roles(m.activity, model, universe, parent.objects)
        parent_roles = _present_roles(parent.objects, universe)
        missing = activity_roles - parent_roles
        if missing:
            records.append(
                DeviationRecord(
                    move_id=m.id,
                    category=MISSING_OBJECT,
                    candidates=(MISSING_OBJECT,),
                    agreeing_roles=frozenset(parent_roles),
                    disagreeing_roles=frozenset(missing),
                    likelihood_rank=len(parent_roles),
                )
            )

    for m in silent_moves:
        records.append(record(m, []))

    # Cross-recorder incomparability that the run had to resolve.
    if log.multi_recorder():
        flagged: set[str] = set()
        firing_order = {
            (a, b)
            for a, b in alignment.order.order
        }
        for mi in sync_moves:
            for mj in sync_moves:
                if mi.id == mj.id or mj.id in flagged:
                    continue
                ei, ej = events.get(mi.event), events.get(mj.event)
                if ei is None or ej is None or ei.id == ej.id:
                    continue
                if ei.recorder is None or ej.recorder is None or ei.recorder == ej.recorder:
                    continue
                if log.order.comparable(ei.id, ej.id):
                    continue
                if (mi.id, mj.id) in firing_order:
                    flagged.add(mj.id)
                    records.append(
                        DeviationRecord(
                            move_id=mj.id,
                            category=MISSING_POSITION,
                            candidates=(MISSING_POSITION,),
                            agreeing_roles=_present_roles(mj.objects, universe),
                            disagreeing_roles=frozenset(),
                            likelihood_rank=len(_present_roles(mj.objects, universe)),
                        )
                    )
    return records


def trust_report(alignment: Alignment, log: SystemLog, model: ProcessModel) -> TrustReport:
    """Per (role, activity): move counts and the share of object slots that
    were synchronized."""
    universe = merge_universes(model.universe, log.universe)
    acc: dict[tuple[str, str], dict[str, int]] = {}

    def bump(role: str, activity: str, kind_field: str, slots: int, synced: int) -> None:
        entry = acc.setdefault(
            (role, activity),
            {
                "sync_moves": 0,
                "relaxed_sync_moves": 0,
                "substitute_moves": 0,
                "log_moves": 0,
                "model_moves": 0,
                "synced_slots": 0,
                "total_slots": 0,
            },
        )
        entry[kind_field] += 1
        entry["total_slots"] += slots
        entry["synced_slots"] += synced

    field_by_kind = {
        "sync": "sync_moves",
        "relaxed_sync": "relaxed_sync_moves",
        "substitute_sync": "substitute_moves",
        "log": "log_moves",
        "relaxed_log": "log_moves",
        "model": "model_moves",
        "relaxed_model": "model_moves",
    }
    for m in alignment.moves:
        if m.activity is None or m.kind == "correlation_silent":
            continue
        objs = m.objects if m.objects is not None else ObjectMultiset.of(
            *m.firing.mode.get().values()
        )
        per_role: dict[str, int] = {}
        for name, count in objs.entries:
            role = universe.role_of(name)
            per_role[role] = per_role.get(role, 0) + count
        for role, slots in per_role.items():
            if m.kind in ("sync", "relaxed_sync"):
                synced = slots
            elif m.kind == "substitute_sync":
                synced = 0 if role in m.substituted_roles else slots
            else:
                synced = 0
            bump(role, m.activity, field_by_kind[m.kind], slots, synced)

    entries = tuple(
        TrustEntry(role=role, activity=activity, **counts)
        for (role, activity), counts in sorted(acc.items())
    )
    return TrustReport(entries)
