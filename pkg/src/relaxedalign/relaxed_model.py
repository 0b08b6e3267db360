"""Relaxed process model: the base net united with all of its role-subset
projections plus silent correlation bind/unbind transitions.

Projected transition copies share the single-role places of the base net;
wherever the base transition touched a multi-role (correlation) place, the
copy reads/writes per-role shadow places instead.  For every correlation
place there is one silent ``bind`` transition assembling a correlated
token out of the shadow tokens and one silent ``unbind`` doing the
reverse, so partial behaviors of different objects can be recombined.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .pnid import (
    Arc,
    Marking,
    Mode,
    ProcessModel,
    Tpnid,
    TransitionFiring,
    VarSeq,
    Variable,
    enabled_modes,
    fire,
    is_enabled,
    tagged,
)


@dataclass(frozen=True)
class RelaxedModel:
    base: ProcessModel
    model: ProcessModel
    correlation_transitions: frozenset[str]
    projection_index: tuple[tuple[str, tuple[str, frozenset[str]]], ...]

    def base_transition(self, t: str) -> str:
        index = dict(self.projection_index)
        return index[t][0] if t in index else t

    def kept_roles(self, t: str) -> frozenset[str] | None:
        index = dict(self.projection_index)
        return index[t][1] if t in index else None

    def var_count(self, t: str) -> int:
        """Variable count of the base transition behind ``t``."""
        if t in self.correlation_transitions:
            return len(self.model.net.transition_vars(t))
        return len(self.base.net.transition_vars(self.base_transition(t)))


def shadow_place(place: str, role: str) -> str:
    return tagged(place, {role})


def build_relaxed_model(model: ProcessModel) -> RelaxedModel:
    net = model.net
    types = net.types()
    vs = dict(net.vars())
    labels = net.labels()

    places: dict[str, tuple[str, ...]] = dict(net.place_type)
    arcs: dict[Arc, tuple[VarSeq, ...]] = net.arc_map()
    new_labels: dict[str, str | None] = dict(net.label)
    provenance: dict[str, tuple[str, frozenset[str]]] = dict(net.provenance)
    variables: dict[str, Variable] = dict(vs)
    correlation: set[str] = set()
    projection_index: dict[str, tuple[str, frozenset[str]]] = {}

    def role_var(role: str, position: int) -> str:
        """A reusable non-fresh variable for the given role (per position,
        for places typed with a repeated role)."""
        base_name = role if position == 0 else f"{role}_{position + 1}"
        existing = variables.get(base_name)
        if existing is not None and existing.role == role and not existing.fresh:
            return base_name
        name = base_name
        while name in variables and (variables[name].role != role or variables[name].fresh):
            name += "_"
        variables.setdefault(name, Variable(name, role))
        return name

    # Shadow places and bind/unbind per correlation place.
    correlation_places = sorted(p for p in net.places if len(set(types[p])) >= 2)
    for place in correlation_places:
        alpha = types[place]
        roles = sorted(set(alpha))
        full_seq: list[str] = []
        per_role_seq: dict[str, list[str]] = {r: [] for r in roles}
        occurrence: dict[str, int] = {r: 0 for r in roles}
        for r in alpha:
            v = role_var(r, occurrence[r])
            occurrence[r] += 1
            full_seq.append(v)
            per_role_seq[r].append(v)
        for r in roles:
            sp = shadow_place(place, r)
            places[sp] = tuple(r for _ in per_role_seq[r])
            provenance[sp] = (place, frozenset({r}))
        bind, unbind = f"bind@{place}", f"unbind@{place}"
        for name in (bind, unbind):
            new_labels[name] = None
            provenance[name] = (place, frozenset(roles))
            correlation.add(name)
        for r in roles:
            arcs[(shadow_place(place, r), bind)] = (tuple(per_role_seq[r]),)
            arcs[(unbind, shadow_place(place, r))] = (tuple(per_role_seq[r]),)
        arcs[(bind, place)] = (tuple(full_seq),)
        arcs[(place, unbind)] = (tuple(full_seq),)

    # Projected transition copies per non-empty proper role subset.
    for t in sorted(net.transitions):
        tvars = net.transition_vars(t)
        troles = sorted({vs[v].role for v in tvars})
        if len(troles) < 2:
            continue
        for size in range(1, len(troles)):
            for subset in itertools.combinations(troles, size):
                kept = frozenset(subset)
                copy = tagged(t, kept)
                new_labels[copy] = labels[t]
                provenance[copy] = (t, kept)
                projection_index[copy] = (t, kept)
                for place, seqs in net.inputs(t):
                    _add_projected_arc(arcs, types, vs, kept, place, copy, seqs, into=True)
                for place, seqs in net.outputs(t):
                    _add_projected_arc(arcs, types, vs, kept, place, copy, seqs, into=False)

    relaxed_net = Tpnid(
        places=frozenset(places),
        transitions=frozenset(new_labels),
        arcs=tuple(sorted(arcs.items())),
        label=tuple(sorted(new_labels.items())),
        place_type=tuple(sorted(places.items())),
        variables=tuple(sorted(variables.values(), key=lambda v: v.name)),
        provenance=tuple(sorted(provenance.items())),
    )
    relaxed = ProcessModel(
        net=relaxed_net, initial=model.initial, final=model.final, universe=model.universe
    )
    return RelaxedModel(
        base=model,
        model=relaxed,
        correlation_transitions=frozenset(correlation),
        projection_index=tuple(sorted(projection_index.items())),
    )


def _add_projected_arc(
    arcs: dict[Arc, tuple[VarSeq, ...]],
    types: dict[str, tuple[str, ...]],
    vs: dict[str, Variable],
    kept: frozenset[str],
    place: str,
    copy: str,
    seqs: tuple[VarSeq, ...],
    *,
    into: bool,
) -> None:
    alpha = types[place]
    alpha_roles = set(alpha)
    if not alpha_roles & kept:
        return
    if alpha_roles <= kept:
        key: Arc = (place, copy) if into else (copy, place)
        arcs[key] = seqs
        return
    # Correlation place only partially kept: route through its shadows.
    for role in sorted(alpha_roles & kept):
        sp = shadow_place(place, role)
        restricted = tuple(
            tuple(v for v in seq if vs[v].role == role) for seq in seqs
        )
        key = (sp, copy) if into else (copy, sp)
        arcs[key] = restricted


def language_inclusion_check(model: ProcessModel, depth: int) -> bool:
    """Bounded-depth check that every firing of the base model is enabled,
    step by step, in its relaxed model (identity embedding)."""
    relaxed = build_relaxed_model(model).model
    frontier: set[Marking] = {model.initial}
    seen: set[Marking] = set(frontier)
    for _ in range(depth):
        next_frontier: set[Marking] = set()
        for marking in frontier:
            for t in sorted(model.net.transitions):
                for mode in enabled_modes(model, marking, t):
                    if not is_enabled(relaxed, marking, t, mode):
                        return False
                    firing = TransitionFiring(id="probe", transition=t, mode=mode)
                    after = fire(model, marking, firing)
                    if after not in seen:
                        seen.add(after)
                        next_frontier.add(after)
        if not next_frontier:
            break
        frontier = next_frontier
    return True
