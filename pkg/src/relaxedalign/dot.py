"""Graphviz DOT export for alignment and log documents.

Nodes are moves (or events) labeled "activity^objects"; edges are the
covering pairs of the partial order.  Deviating moves get distinct style
classes, either by move kind or by involved roles.
"""

from __future__ import annotations

from typing import Any, Mapping

from .errors import DocumentError

KIND_STYLE = {
    "sync": 'shape=box, style="filled", fillcolor=white',
    "relaxed_sync": 'shape=box, style="filled", fillcolor=lightcyan',
    "substitute_sync": 'shape=box, style="filled", fillcolor=khaki',
    "log": 'shape=box, style="filled", fillcolor=gold',
    "relaxed_log": 'shape=box, style="filled", fillcolor=plum',
    "model": 'shape=box, style="filled", fillcolor=gold',
    "relaxed_model": 'shape=box, style="filled", fillcolor=plum',
    "correlation_silent": 'shape=box, style="filled,dashed", fillcolor=gray90',
}

_PALETTE = ("lightblue", "lightgreen", "lightsalmon", "lightyellow", "lightpink")


def _quote(text: str) -> str:
    return '"' + text.replace('"', '\\"') + '"'


def _label(activity: str | None, objects: list[str] | None) -> str:
    name = activity if activity is not None else "tau"
    if objects:
        return f"{name}^{{{','.join(objects)}}}"
    return name


def export_dot(doc: Mapping[str, Any], color_by: str = "kind") -> str:
    if color_by not in ("kind", "role"):
        raise DocumentError(f"unknown color key {color_by!r}")
    if "moves" in doc:
        return _alignment_dot(doc, color_by)
    if "events" in doc:
        return _log_dot(doc, color_by)
    raise DocumentError("document has neither moves nor events")


def _role_styles(role_sets: list[frozenset[str]]) -> dict[frozenset[str], str]:
    styles = {}
    for i, roles in enumerate(sorted(set(role_sets), key=sorted)):
        color = _PALETTE[i % len(_PALETTE)]
        styles[roles] = f'shape=box, style="filled", fillcolor={color}'
    return styles


def _alignment_dot(doc: Mapping[str, Any], color_by: str) -> str:
    lines = ["digraph alignment {", "  rankdir=LR;"]
    role_of = {o["name"]: o["role"] for o in doc.get("objects", [])}
    if color_by == "role":
        sets = [
            frozenset(role_of.get(n, "?") for n in m.get("objects", []) or m.get("mode", {}).values())
            for m in doc["moves"]
        ]
        styles = _role_styles(sets)
    for m in doc["moves"]:
        objects = m.get("objects")
        if objects is None and "mode" in m:
            objects = sorted(m["mode"].values())
        label = _label(m.get("activity"), objects)
        if color_by == "kind":
            style = KIND_STYLE.get(m["kind"], KIND_STYLE["sync"])
        else:
            roles = frozenset(role_of.get(n, "?") for n in (objects or []))
            style = styles[roles]
        deviating = m["kind"] in ("log", "relaxed_log", "model", "relaxed_model")
        pen = ", penwidth=2" if deviating else ""
        lines.append(
            f"  {_quote(m['id'])} [label={_quote(label + chr(10) + m['kind'])}, {style}{pen}];"
        )
    for a, b in doc.get("order", []):
        lines.append(f"  {_quote(a)} -> {_quote(b)};")
    lines.append("}")
    return "\n".join(lines)


def _log_dot(doc: Mapping[str, Any], color_by: str) -> str:
    lines = ["digraph log {", "  rankdir=LR;"]
    role_of = {o["name"]: o["role"] for o in doc.get("objects", [])}
    if color_by == "role":
        sets = [frozenset(role_of.get(n, "?") for n in e["objects"]) for e in doc["events"]]
        styles = _role_styles(sets)
    for e in doc["events"]:
        label = _label(e["activity"], e["objects"])
        if color_by == "kind":
            style = KIND_STYLE["sync"]
        else:
            style = styles[frozenset(role_of.get(n, "?") for n in e["objects"])]
        lines.append(f"  {_quote(e['id'])} [label={_quote(label)}, {style}];")
    for a, b in doc.get("order", []):
        lines.append(f"  {_quote(a)} -> {_quote(b)};")
    lines.append("}")
    return "\n".join(lines)
