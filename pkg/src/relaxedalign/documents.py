"""Document (de)serialization: models, logs, alignments, reports.

All documents are plain JSON objects with a required ``version: 1``.
Costs serialize as normalized exact-rational strings ("2", "1/512",
"3+1/512") so golden files never contain floats.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Mapping

from .alignment.moves import Alignment, Move
from .diagnosis import DeviationRecord, TrustReport
from .errors import DocumentError
from .logs import Event, SystemLog, build_log, derive_order_from_timestamps
from .objects import ObjectMultiset, ObjectUniverse, ROLE_KINDS, Role
from .pnid import Marking, Mode, ProcessModel, Tpnid, TransitionFiring, Variable
from .poset import Poset
from .relaxed_model import RelaxedModel

VERSION = 1


def format_fraction(value: Fraction) -> str:
    value = Fraction(value)
    if value < 0:
        return f"-{format_fraction(-value)}"
    whole, rest = divmod(value.numerator, value.denominator)
    if rest == 0:
        return str(whole)
    frac = Fraction(rest, value.denominator)
    if whole == 0:
        return f"{frac.numerator}/{frac.denominator}"
    return f"{whole}+{frac.numerator}/{frac.denominator}"


def parse_fraction(text: str) -> Fraction:
    text = text.strip()
    try:
        if "+" in text:
            whole, frac = text.split("+", 1)
            return Fraction(int(whole)) + Fraction(frac)
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad rational {text!r}: {exc}") from exc


def _require_version(doc: Mapping[str, Any], what: str) -> None:
    if not isinstance(doc, Mapping):
        raise DocumentError(f"{what} must be an object")
    if doc.get("version") != VERSION:
        raise DocumentError(f"{what} needs \"version\": {VERSION}")


# -- universes ---------------------------------------------------------------


def universe_to_doc(universe: ObjectUniverse) -> dict[str, Any]:
    return {
        "roles": [{"name": r.name, "kind": r.kind} for r in universe.roles],
        "objects": [
            {
                "name": name,
                "role": universe.role_of(name),
                "count": count,
            }
            for name, count in universe.objects.entries
        ],
    }


def universe_from_doc(doc: Mapping[str, Any], what: str) -> ObjectUniverse:
    try:
        roles = tuple(Role(r["name"], r.get("kind", "spontaneous")) for r in doc.get("roles", []))
        objects = {
            o["name"]: (o["role"], int(o.get("count", 1))) for o in doc.get("objects", [])
        }
        return ObjectUniverse.build(roles, objects)
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"{what}: bad universe: {exc}") from exc


# -- models --------------------------------------------------------------------


def model_to_doc(model: ProcessModel, *, annotations: Mapping[str, Any] | None = None) -> dict[str, Any]:
    net = model.net

    def marking_doc(m: Marking) -> dict[str, list[list[str]]]:
        out: dict[str, list[list[str]]] = {}
        for place, token, count in m.tokens:
            out.setdefault(place, []).extend([list(token)] * count)
        return out

    doc: dict[str, Any] = {
        "version": VERSION,
        **universe_to_doc(model.universe),
        "variables": [
            {"name": v.name, "role": v.role, "fresh": v.fresh} for v in net.variables
        ],
        "places": [
            {"id": p, "type": list(t)} for p, t in sorted(net.place_type)
        ],
        "transitions": [
            {
                "id": t,
                "label": dict(net.label)[t],
                "inputs": [
                    {"place": place, "vars": [list(seq) for seq in seqs]}
                    for place, seqs in net.inputs(t)
                ],
                "outputs": [
                    {"place": place, "vars": [list(seq) for seq in seqs]}
                    for place, seqs in net.outputs(t)
                ],
            }
            for t in sorted(net.transitions)
        ],
        "initial_marking": marking_doc(model.initial),
        "final_marking": marking_doc(model.final),
    }
    if net.provenance:
        doc["provenance"] = {
            node: {"base": base, "roles": sorted(roles)}
            for node, (base, roles) in net.provenance
        }
    if annotations:
        doc.update(annotations)
    return doc


def model_from_doc(doc: Mapping[str, Any]) -> ProcessModel:
    _require_version(doc, "model document")
    universe = universe_from_doc(doc, "model document")
    try:
        variables = tuple(
            Variable(v["name"], v["role"], bool(v.get("fresh", False)))
            for v in doc.get("variables", [])
        )
        place_type = tuple(
            (p["id"], tuple(p["type"])) for p in doc.get("places", [])
        )
        places = frozenset(p for p, _ in place_type)
        arcs: dict = {}
        labels = []
        transitions = []
        for t in doc.get("transitions", []):
            tid = t["id"]
            transitions.append(tid)
            labels.append((tid, t.get("label")))
            for arc in t.get("inputs", []):
                arcs[(arc["place"], tid)] = tuple(tuple(seq) for seq in arc["vars"])
            for arc in t.get("outputs", []):
                arcs[(tid, arc["place"])] = tuple(tuple(seq) for seq in arc["vars"])

        def marking(key: str) -> Marking:
            content = doc.get(key, {})
            return Marking.of({p: [tuple(tok) for tok in toks] for p, toks in content.items()})

        provenance: tuple = ()
        if "provenance" in doc:
            provenance = tuple(
                sorted(
                    (node, (entry["base"], frozenset(entry["roles"])))
                    for node, entry in doc["provenance"].items()
                )
            )
        net = Tpnid(
            places=places,
            transitions=frozenset(transitions),
            arcs=tuple(sorted(arcs.items())),
            label=tuple(sorted(labels)),
            place_type=tuple(sorted(place_type)),
            variables=variables,
            provenance=provenance,
        )
        return ProcessModel(
            net=net,
            initial=marking("initial_marking"),
            final=marking("final_marking"),
            universe=universe,
        )
    except DocumentError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"model document: {exc}") from exc


def relaxed_model_to_doc(relaxed: RelaxedModel) -> dict[str, Any]:
    return model_to_doc(
        relaxed.model,
        annotations={
            "correlation_transitions": sorted(relaxed.correlation_transitions),
            "projection_index": {
                t: {"base": base, "roles": sorted(roles)}
                for t, (base, roles) in relaxed.projection_index
            },
        },
    )


# -- logs -----------------------------------------------------------------------


def log_to_doc(log: SystemLog) -> dict[str, Any]:
    return {
        "version": VERSION,
        **universe_to_doc(log.universe),
        "events": [
            {
                "id": e.id,
                "activity": e.activity,
                "objects": list(e.objects),
                **({"recorder": e.recorder} if e.recorder else {}),
            }
            for e in log.events
        ],
        "order": sorted([a, b] for a, b in log.order.covering_relation()),
    }


def log_from_doc(doc: Mapping[str, Any]) -> SystemLog:
    _require_version(doc, "log document")
    universe = universe_from_doc(doc, "log document")
    try:
        events = []
        timestamps: dict[str, Fraction] = {}
        for entry in doc.get("events", []):
            events.append(
                Event(
                    id=entry["id"],
                    activity=entry["activity"],
                    objects=ObjectMultiset.of(*entry["objects"]),
                    recorder=entry.get("recorder"),
                )
            )
            if "timestamp" in entry:
                timestamps[entry["id"]] = Fraction(str(entry["timestamp"]))
        ids = {e.id for e in events}
        if "order" in doc and doc["order"] is not None:
            pairs = []
            for pair in doc["order"]:
                a, b = pair
                if a not in ids or b not in ids:
                    raise DocumentError(f"order pair {pair!r} references unknown events")
                pairs.append((a, b))
            return build_log(universe, events, pairs)
        if timestamps:
            if set(timestamps) != ids:
                raise DocumentError("either all events or none carry timestamps")
            tolerance = Fraction(str(doc.get("order_tolerance", 0)))
            order = derive_order_from_timestamps(timestamps, tolerance)
            return SystemLog(tuple(events), order, universe)
        return build_log(universe, events, ())
    except DocumentError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"log document: {exc}") from exc


# -- alignments -------------------------------------------------------------------


def alignment_to_doc(alignment: Alignment) -> dict[str, Any]:
    moves = []
    for m in alignment.moves:
        entry: dict[str, Any] = {
            "id": m.id,
            "kind": m.kind,
            "activity": m.activity,
            "cost": format_fraction(m.cost),
        }
        if m.event is not None:
            entry["event"] = m.event
            entry["fragment"] = m.fragment_id
            entry["objects"] = list(m.objects)
        if m.firing is not None:
            entry["firing"] = m.firing.id
            entry["transition"] = m.firing.transition
            entry["mode"] = {v: o for v, o in m.firing.mode.binding}
        if m.substituted_roles:
            entry["substituted_roles"] = sorted(m.substituted_roles)
        moves.append(entry)
    return {
        "version": VERSION,
        "moves": moves,
        "order": sorted([a, b] for a, b in alignment.order.covering_relation()),
        "total_cost": format_fraction(alignment.total_cost),
    }


def alignment_from_doc(doc: Mapping[str, Any]) -> Alignment:
    _require_version(doc, "alignment document")
    try:
        moves = []
        for entry in doc["moves"]:
            firing = None
            if "firing" in entry:
                firing = TransitionFiring(
                    id=entry["firing"],
                    transition=entry["transition"],
                    mode=Mode(tuple(entry["mode"].items())),
                )
            moves.append(
                Move(
                    id=entry["id"],
                    kind=entry["kind"],
                    activity=entry.get("activity"),
                    event=entry.get("event"),
                    fragment_id=entry.get("fragment"),
                    objects=ObjectMultiset.of(*entry["objects"]) if "objects" in entry else None,
                    firing=firing,
                    substituted_roles=frozenset(entry.get("substituted_roles", [])),
                    cost=parse_fraction(entry["cost"]),
                )
            )
        order = Poset.from_pairs([m.id for m in moves], [tuple(p) for p in doc.get("order", [])])
        return Alignment(tuple(moves), order, parse_fraction(doc["total_cost"]))
    except DocumentError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"alignment document: {exc}") from exc


# -- diagnosis --------------------------------------------------------------------


def diagnosis_to_doc(records: list[DeviationRecord], trust: TrustReport) -> dict[str, Any]:
    return {
        "version": VERSION,
        "deviations": [
            {
                "move": r.move_id,
                "category": r.category,
                "candidates": list(r.candidates),
                "issue_codes": list(r.issue_codes()),
                "agreeing_roles": sorted(r.agreeing_roles),
                "disagreeing_roles": sorted(r.disagreeing_roles),
                "likelihood_rank": r.likelihood_rank,
            }
            for r in records
        ],
        "trust": [
            {
                "role": e.role,
                "activity": e.activity,
                "sync_moves": e.sync_moves,
                "relaxed_sync_moves": e.relaxed_sync_moves,
                "substitute_moves": e.substitute_moves,
                "log_moves": e.log_moves,
                "model_moves": e.model_moves,
                "synced_slots": e.synced_slots,
                "total_slots": e.total_slots,
                "trust_score": format_fraction(e.trust_score),
            }
            for e in trust.entries
        ],
    }
