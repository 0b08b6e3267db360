"""Typed Petri nets with identifiers: structure, markings, firing, projections.

Places carry role-sequence types; arcs carry multisets of variable
sequences; transitions fire under modes binding variables to object
names.  Fresh (nu) variables mint object names unused in the current
marking.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import NotEnabled
from .objects import ObjectMultiset, ObjectUniverse
from .poset import Poset

Token = tuple[str, ...]
Arc = tuple[str, str]
VarSeq = tuple[str, ...]


@dataclass(frozen=True)
class Variable:
    name: str
    role: str
    fresh: bool = False


@dataclass(frozen=True)
class Tpnid:
    """Net structure.  ``arcs`` maps (src, dst) to the tuple of variable
    sequences carried by that arc; an arc moving two tokens carries two
    sequences.  ``label`` values of None mean silent (tau) transitions.
    ``provenance`` records, for projected/derived nodes, the base node id
    and the kept roles."""

    places: frozenset[str]
    transitions: frozenset[str]
    arcs: tuple[tuple[Arc, tuple[VarSeq, ...]], ...]
    label: tuple[tuple[str, str | None], ...]
    place_type: tuple[tuple[str, tuple[str, ...]], ...]
    variables: tuple[Variable, ...]
    provenance: tuple[tuple[str, tuple[str, frozenset[str]]], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "arcs", tuple(sorted(self.arcs)))
        object.__setattr__(self, "label", tuple(sorted(self.label)))
        object.__setattr__(self, "place_type", tuple(sorted(self.place_type)))
        object.__setattr__(self, "provenance", tuple(sorted(self.provenance)))
        object.__setattr__(
            self, "variables", tuple(sorted(self.variables, key=lambda v: v.name))
        )
        if self.places & self.transitions:
            raise ValueError("places and transitions must be disjoint")
        types = self.types()
        vs = self.vars()
        for (src, dst), seqs in self.arcs:
            place, transition = (src, dst) if src in self.places else (dst, src)
            if place not in self.places or transition not in self.transitions:
                raise ValueError(f"arc ({src!r}, {dst!r}) must join a place and a transition")
            alpha = types[place]
            for seq in seqs:
                roles = tuple(vs[v].role for v in seq)
                if roles != alpha:
                    raise ValueError(
                        f"arc ({src!r}, {dst!r}) sequence {seq} has roles {roles}, place type is {alpha}"
                    )
        for t in self.transitions:
            inputs = {v for (s, d), seqs in self.arcs if d == t for seq in seqs for v in seq}
            for (s, d), seqs in self.arcs:
                if s == t:
                    for seq in seqs:
                        for v in seq:
                            if not vs[v].fresh and v not in inputs:
                                raise ValueError(
                                    f"output variable {v!r} of {t!r} is neither fresh nor consumed"
                                )
                if d == t:
                    for seq in seqs:
                        for v in seq:
                            if vs[v].fresh:
                                raise ValueError(f"fresh variable {v!r} on an input arc of {t!r}")

    def types(self) -> dict[str, tuple[str, ...]]:
        return dict(self.place_type)

    def vars(self) -> dict[str, Variable]:
        return {v.name: v for v in self.variables}

    def labels(self) -> dict[str, str | None]:
        return dict(self.label)

    def arc_map(self) -> dict[Arc, tuple[VarSeq, ...]]:
        return dict(self.arcs)

    def inputs(self, t: str) -> list[tuple[str, tuple[VarSeq, ...]]]:
        return sorted((src, seqs) for (src, dst), seqs in self.arcs if dst == t)

    def outputs(self, t: str) -> list[tuple[str, tuple[VarSeq, ...]]]:
        return sorted((dst, seqs) for (src, dst), seqs in self.arcs if src == t)

    def transition_vars(self, t: str) -> tuple[str, ...]:
        names: list[str] = []
        for _, seqs in self.inputs(t) + self.outputs(t):
            for seq in seqs:
                for v in seq:
                    if v not in names:
                        names.append(v)
        return tuple(sorted(names))

    def var_count(self, t: str) -> int:
        """Count of variable slots of t; for projected transitions the
        base transition's count, per the provenance table."""
        prov = dict(self.provenance)
        if t in prov:
            base, _ = prov[t]
            if base != t and base in self.transitions:
                return len(self.transition_vars(base))
        return len(self.transition_vars(t))

    def activity_transitions(self, activity: str) -> list[str]:
        return sorted(t for t, lab in self.label if lab == activity)


@dataclass(frozen=True, eq=False)
class Marking:
    """Tokens per place; each token is a tuple of object names matching
    the place's type."""

    tokens: tuple[tuple[str, Token, int], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "tokens", tuple(sorted((p, t, c) for p, t, c in self.tokens if c > 0))
        )
        object.__setattr__(self, "_hash", hash(self.tokens))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Marking) and self.tokens == other.tokens

    @classmethod
    def of(cls, content: Mapping[str, Iterable[Token]]) -> "Marking":
        counts: dict[tuple[str, Token], int] = {}
        for place, toks in content.items():
            for tok in toks:
                counts[(place, tok)] = counts.get((place, tok), 0) + 1
        return cls(tuple((p, t, c) for (p, t), c in counts.items()))

    def at(self, place: str) -> dict[Token, int]:
        return {t: c for p, t, c in self.tokens if p == place}

    def counts(self) -> dict[tuple[str, Token], int]:
        return {(p, t): c for p, t, c in self.tokens}

    def object_names(self) -> frozenset[str]:
        return frozenset(name for _, tok, _ in self.tokens for name in tok)

    def add(self, items: Iterable[tuple[str, Token]]) -> "Marking":
        counts = self.counts()
        for place, tok in items:
            counts[(place, tok)] = counts.get((place, tok), 0) + 1
        return Marking(tuple((p, t, c) for (p, t), c in counts.items()))

    def remove(self, items: Iterable[tuple[str, Token]]) -> "Marking":
        counts = self.counts()
        for place, tok in items:
            have = counts.get((place, tok), 0)
            if have < 1:
                raise NotEnabled(f"no token {tok} in {place!r}")
            counts[(place, tok)] = have - 1
        return Marking(tuple((p, t, c) for (p, t), c in counts.items() if c > 0))

    def is_empty(self) -> bool:
        return not self.tokens


@dataclass(frozen=True, eq=False)
class Mode:
    """Variable-to-object binding instantiating one transition firing."""

    binding: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "binding", tuple(sorted(self.binding)))
        object.__setattr__(self, "_hash", hash(self.binding))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Mode) and self.binding == other.binding

    @classmethod
    def of(cls, **binding: str) -> "Mode":
        return cls(tuple(binding.items()))

    def get(self) -> dict[str, str]:
        return dict(self.binding)

    def __str__(self) -> str:
        return "{" + ",".join(f"{v}->{o}" for v, o in self.binding) + "}"


@dataclass(frozen=True)
class TransitionFiring:
    id: str
    transition: str
    mode: Mode

    def involved(self, net: Tpnid) -> ObjectMultiset:
        binding = self.mode.get()
        return ObjectMultiset.of(*(binding[v] for v in net.transition_vars(self.transition)))


@dataclass(frozen=True)
class ProcessModel:
    net: Tpnid
    initial: Marking
    final: Marking
    universe: ObjectUniverse


@dataclass(frozen=True)
class ExecutionPoset:
    """Partially ordered transition firings; valid when every linear
    extension is a firing sequence from the initial to the final marking."""

    run: Poset
    firings: tuple[TransitionFiring, ...]

    def __post_init__(self) -> None:
        ids = {f.id for f in self.firings}
        if ids != set(self.run.elements):
            raise ValueError("run elements and firing ids differ")

    def firing_map(self) -> dict[str, TransitionFiring]:
        return {f.id: f for f in self.firings}


# -- firing semantics ------------------------------------------------------


def instantiate_arcs(
    net: Tpnid, arcs: list[tuple[str, tuple[VarSeq, ...]]], binding: Mapping[str, str]
) -> list[tuple[str, Token]]:
    out: list[tuple[str, Token]] = []
    for place, seqs in arcs:
        for seq in seqs:
            out.append((place, tuple(binding[v] for v in seq)))
    return out


def canonical_fresh_name(role: str, used: frozenset[str]) -> str:
    """Lowest-index unused name in a role-scoped counter (role1, role2, ...)."""
    k = 1
    while f"{role}{k}" in used:
        k += 1
    return f"{role}{k}"


def enabled_modes(
    model: ProcessModel,
    marking: Marking,
    t: str,
    fresh_candidates: Iterable[str] = (),
) -> tuple[Mode, ...]:
    """All modes under which ``t`` is enabled in ``marking``.

    Input-arc variables bind to tokens present in the marking; each fresh
    variable binds to one canonical unused name plus any of the supplied
    candidates that are unused.  The result is exhaustive over token
    bindings and deterministic (sorted).
    """
    net = model.net
    if t not in net.transitions:
        raise ValueError(f"unknown transition {t!r}")
    vs = net.vars()
    demands: list[tuple[str, VarSeq]] = []
    for place, seqs in net.inputs(t):
        for seq in seqs:
            demands.append((place, seq))

    results: set[Mode] = set()

    def assign(i: int, binding: dict[str, str], taken: dict[tuple[str, Token], int]) -> None:
        if i == len(demands):
            complete_fresh(binding)
            return
        place, seq = demands[i]
        available = marking.at(place)
        for tok in sorted(available):
            if taken.get((place, tok), 0) >= available[tok]:
                continue
            new = dict(binding)
            ok = True
            for v, obj in zip(seq, tok):
                if new.get(v, obj) != obj:
                    ok = False
                    break
                new[v] = obj
            if not ok:
                continue
            taken[(place, tok)] = taken.get((place, tok), 0) + 1
            assign(i + 1, new, taken)
            taken[(place, tok)] -= 1

    def complete_fresh(binding: dict[str, str]) -> None:
        fresh_vars = sorted(v for v in net.transition_vars(t) if vs[v].fresh)
        declared = dict(model.universe.role_by_object)
        used = marking.object_names() | frozenset(binding.values())
        options: list[list[str]] = []
        for v in fresh_vars:
            cands = [
                c
                for c in fresh_candidates
                if c not in used and declared.get(c) == vs[v].role
            ]
            cands.append(canonical_fresh_name(vs[v].role, used | frozenset(declared)))
            options.append(sorted(set(cands)))
        for combo in itertools.product(*options) if fresh_vars else [()]:
            if len(set(combo)) != len(combo):
                continue
            full = dict(binding)
            for v, name in zip(fresh_vars, combo):
                full[v] = name
            results.add(Mode(tuple(full.items())))

    assign(0, {}, {})
    return tuple(sorted(results, key=lambda m: m.binding))


def is_enabled(model: ProcessModel, marking: Marking, t: str, mode: Mode) -> bool:
    net = model.net
    binding = mode.get()
    if set(binding) != set(net.transition_vars(t)):
        return False
    vs = net.vars()
    used = marking.object_names()
    for v in net.transition_vars(t):
        if vs[v].fresh and binding[v] in used:
            return False
    need = instantiate_arcs(net, net.inputs(t), binding)
    counts: dict[tuple[str, Token], int] = {}
    for place, tok in need:
        counts[(place, tok)] = counts.get((place, tok), 0) + 1
    have = marking.counts()
    return all(have.get(key, 0) >= c for key, c in counts.items())


def fire(model: ProcessModel, marking: Marking, firing: TransitionFiring) -> Marking:
    """Remove instantiated input tokens, add instantiated output tokens."""
    net = model.net
    if not is_enabled(model, marking, firing.transition, firing.mode):
        raise NotEnabled(f"{firing.transition} not enabled under {firing.mode}")
    binding = firing.mode.get()
    removed = instantiate_arcs(net, net.inputs(firing.transition), binding)
    added = instantiate_arcs(net, net.outputs(firing.transition), binding)
    return marking.remove(removed).add(added)


def replay(model: ProcessModel, firings: Sequence[TransitionFiring]) -> Marking:
    marking = model.initial
    for f in firings:
        marking = fire(model, marking, f)
    return marking


def final_marking_matches(
    model: ProcessModel, marking: Marking, *, ignorable: frozenset[str] = frozenset()
) -> bool:
    """Exact final-marking equality, optionally blind to tokens made up
    solely of ignorable (idle, never-observed) objects."""

    def strip(m: Marking) -> Marking:
        if not ignorable:
            return m
        return Marking(
            tuple(
                (p, tok, c)
                for p, tok, c in m.tokens
                if not all(name in ignorable for name in tok)
            )
        )

    return strip(marking) == strip(model.final)


def run_reaches_final(
    model: ProcessModel,
    run: ExecutionPoset,
    *,
    ignorable: frozenset[str] = frozenset(),
) -> bool:
    """True iff every linear extension of the run fires from the initial to
    the final marking.

    Explores downward-closed frontiers once instead of enumerating all
    extensions: markings after a fixed multiset of firings are order
    independent, so states are memoized by consumed set; a state must
    enable *every* minimal remaining firing for all extensions to replay.
    """
    firing_of = run.firing_map()
    all_ids = frozenset(run.run.elements)
    preds = {x: run.run.predecessors(x) for x in all_ids}
    seen: dict[frozenset[str], bool] = {}

    def explore(consumed: frozenset[str], marking: Marking) -> bool:
        if consumed in seen:
            return seen[consumed]
        if consumed == all_ids:
            ok = final_marking_matches(model, marking, ignorable=ignorable)
            seen[consumed] = ok
            return ok
        ok = True
        for x in sorted(all_ids - consumed):
            if preds[x] <= consumed:
                f = firing_of[x]
                if not is_enabled(model, marking, f.transition, f.mode):
                    ok = False
                    break
                if not explore(consumed | {x}, fire(model, marking, f)):
                    ok = False
                    break
        seen[consumed] = ok
        return ok

    return explore(frozenset(), model.initial)


def is_execution_poset(model: ProcessModel, run: ExecutionPoset) -> bool:
    return run_reaches_final(model, run)


# -- projections -----------------------------------------------------------


def tagged(node: str, kept: Iterable[str]) -> str:
    return f"{node}|{'+'.join(sorted(kept))}"


def project_net(model: ProcessModel, objs: ObjectMultiset) -> ProcessModel:
    """Projection of the model onto the roles of ``objs``.

    Keeps places whose type intersects the kept roles (with the type
    reduced to kept roles), transitions incident to kept places, and arc
    variable sequences restricted to kept roles.  Nodes whose type or
    variable set changed carry a projection tag.  Markings are projected
    tokenwise and capped by ``objs``.
    """
    universe = model.universe
    roles = universe.roles_of(objs)
    net = model.net
    types = net.types()
    vs = net.vars()

    place_name: dict[str, str] = {}
    new_types: dict[str, tuple[str, ...]] = {}
    for p in sorted(net.places):
        alpha = types[p]
        kept = tuple(r for r in alpha if r in roles)
        if not kept:
            continue
        name = p if kept == alpha else tagged(p, set(kept))
        place_name[p] = name
        new_types[name] = kept

    trans_name: dict[str, str] = {}
    new_labels: dict[str, str | None] = {}
    labels = net.labels()
    for t in sorted(net.transitions):
        incident = [p for p, _ in net.inputs(t) + net.outputs(t)]
        if not any(p in place_name for p in incident):
            continue
        tvars = net.transition_vars(t)
        kept_vars = tuple(v for v in tvars if vs[v].role in roles)
        name = t if kept_vars == tvars else tagged(t, {vs[v].role for v in kept_vars})
        trans_name[t] = name
        new_labels[name] = labels[t]

    new_arcs: dict[Arc, tuple[VarSeq, ...]] = {}
    used_vars: set[str] = set()
    for (src, dst), seqs in sorted(net.arcs):
        place, transition = (src, dst) if src in net.places else (dst, src)
        if place not in place_name or transition not in trans_name:
            continue
        new_seqs = []
        for seq in seqs:
            restricted = tuple(v for v in seq if vs[v].role in roles)
            new_seqs.append(restricted)
            used_vars.update(restricted)
        key: Arc = (
            (place_name[place], trans_name[transition])
            if src == place
            else (trans_name[transition], place_name[place])
        )
        new_arcs[key] = tuple(new_seqs)

    def project_marking(m: Marking) -> Marking:
        allowance = objs.counts()
        out: list[tuple[str, Token]] = []
        for p, tok, count in sorted(m.tokens):
            if p not in place_name:
                continue
            alpha = types[p]
            reduced = tuple(o for o, r in zip(tok, alpha) if r in roles)
            for _ in range(count):
                if all(allowance.get(o, 0) >= 1 for o in reduced):
                    for o in reduced:
                        allowance[o] -= 1
                    out.append((place_name[p], reduced))
        return Marking.of({p: [t for q, t in out if q == p] for p in set(q for q, _ in out)})

    provenance = {name: (base, roles) for base, name in place_name.items() if name != base}
    provenance.update({name: (base, roles) for base, name in trans_name.items() if name != base})

    projected = Tpnid(
        places=frozenset(new_types),
        transitions=frozenset(new_labels),
        arcs=tuple(sorted(new_arcs.items())),
        label=tuple(sorted(new_labels.items())),
        place_type=tuple(sorted(new_types.items())),
        variables=tuple(sorted((vs[v] for v in used_vars), key=lambda v: v.name)),
        provenance=tuple(sorted((n, (b, frozenset(r))) for n, (b, r) in provenance.items())),
    )
    return ProcessModel(
        net=projected,
        initial=project_marking(model.initial),
        final=project_marking(model.final),
        universe=universe,
    )
