"""Cost-optimal alignment search over the synchronous product of log cuts
and model markings.

States pair a per-event residue (objects of the event not yet consumed,
which realizes the relaxed-log bookkeeping lazily) with a marking of the
working net (the base net for regular alignments, the relaxed net for
relaxed ones).  A best-first search with an admissible object-conservation
heuristic pops states in (cost, fewer-deviating, fewer-relaxed) order, so
results are optimal and deterministic.  Costs are exact: internally they
live on an integer grid (the common denominator of the epsilon powers and
move weights), externally as rationals.  For relaxed alignments the
regular alignment, repriced in the relaxed scheme, seeds an upper bound
that prunes the frontier.
"""

from __future__ import annotations

import heapq
import itertools
import math
import os
from dataclasses import replace
from fractions import Fraction
from typing import Iterable

from ..errors import BudgetExceeded, NoAlignment, NotEnabled
from ..logs import SystemLog, is_relaxed_version
from ..objects import ObjectMultiset, ObjectUniverse, Role
from ..pnid import (
    Marking,
    Mode,
    ProcessModel,
    canonical_fresh_name,
    final_marking_matches,
)
from ..relaxed_model import RelaxedModel, build_relaxed_model
from .assemble import Blueprint, assemble_alignment
from .costs import RELAXED, STANDARD, CostParams
from .moves import Alignment

DEFAULT_MAX_STATES = 5_000_000

_DEVIATING = frozenset(("log", "relaxed_log", "model", "relaxed_model"))
_RELAXING = frozenset(("relaxed_sync", "relaxed_log", "relaxed_model", "substitute_sync"))

Entries = tuple[tuple[str, int], ...]


def state_budget(explicit: int | None = None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get("RA_MAX_STATES")
    return int(env) if env else DEFAULT_MAX_STATES


def merge_universes(a: ObjectUniverse, b: ObjectUniverse) -> ObjectUniverse:
    roles: dict[str, Role] = {r.name: r for r in a.roles}
    for r in b.roles:
        if r.name in roles and roles[r.name].kind != r.kind:
            raise ValueError(f"role {r.name!r} declared with two kinds")
        roles.setdefault(r.name, r)
    counts = a.objects.counts()
    role_of = dict(a.role_by_object)
    for name, count in b.objects.entries:
        counts[name] = max(counts.get(name, 0), count)
        other = dict(b.role_by_object)[name]
        if role_of.setdefault(name, other) != other:
            raise ValueError(f"object {name!r} declared with two roles")
    return ObjectUniverse(
        tuple(sorted(roles.values(), key=lambda r: r.name)),
        ObjectMultiset.from_counts(counts),
        tuple(role_of.items()),
    )


# -- residue helpers (plain entry tuples, kept out of the object layer) ------


def _entries_count(entries: Entries, name: str) -> int:
    for n, c in entries:
        if n == name:
            return c
    return 0


def _entries_subtract(entries: Entries, frag: Entries) -> Entries:
    removal = dict(frag)
    out = []
    for n, c in entries:
        take = removal.get(n, 0)
        if c - take > 0:
            out.append((n, c - take))
    return tuple(out)


def _entries_leq(small: Entries, big: Entries) -> bool:
    lookup = dict(big)
    return all(lookup.get(n, 0) >= c for n, c in small)


class _Node:
    __slots__ = ("state", "g", "deviating", "relaxed", "parent", "blueprint")

    def __init__(self, state, g, deviating, relaxed, parent, blueprint):
        self.state = state
        self.g = g
        self.deviating = deviating
        self.relaxed = relaxed
        self.parent = parent
        self.blueprint = blueprint

    def path(self) -> list[Blueprint]:
        out: list[Blueprint] = []
        node: _Node | None = self
        while node is not None and node.blueprint is not None:
            out.append(node.blueprint)
            node = node.parent
        out.reverse()
        return out


class _Problem:
    """Preprocessed, immutable search context."""

    def __init__(
        self,
        log: SystemLog,
        model: ProcessModel,
        params: CostParams,
        *,
        relaxed: bool,
        substitutable_roles: frozenset[str],
        strict_final: bool,
        max_states: int | None,
    ) -> None:
        self.log = log
        self.params = params
        self.relaxed = relaxed
        self.substitutable = substitutable_roles
        self.strict_final = strict_final
        self.budget = state_budget(max_states)

        eps = params.epsilon
        self.scale = math.lcm(
            (eps * eps).denominator,
            eps.denominator,
            params.log_weight.denominator,
            params.model_weight.denominator,
        )

        universe = merge_universes(model.universe, log.universe)
        base = replace(model, universe=universe)
        self.base = base
        self.relaxed_model: RelaxedModel | None = None
        if relaxed:
            self.relaxed_model = build_relaxed_model(base)
            self.work = self.relaxed_model.model
        else:
            self.work = base
        self.net = self.work.net
        self.universe = universe

        self.events = {e.id: e for e in log.events}
        self.event_ids = tuple(sorted(self.events))
        self.index_of = {eid: i for i, eid in enumerate(self.event_ids)}
        self.order = log.order
        self.labels = self.net.labels()
        self.by_activity: dict[str, list[str]] = {}
        for t in sorted(self.net.transitions):
            lab = self.labels[t]
            if lab is not None:
                self.by_activity.setdefault(lab, []).append(t)
        prov = dict(self.net.provenance)
        self.projected = {
            t for t in self.net.transitions if t in prov and prov[t][0] in self.net.transitions
        }
        self.correlation = (
            self.relaxed_model.correlation_transitions if self.relaxed_model else frozenset()
        )
        self.projected -= self.correlation

        self.fresh_candidates = tuple(
            sorted({n for e in log.events for n in e.objects.support()})
        )
        self.role_of_var = {v.name: v.role for v in self.net.variables}
        self.role_name = universe.role_map()
        self.multi_copy_objects = frozenset(
            n for n, c in universe.objects.entries if c > 1
        )
        # A canonically minted object never appears in the log, so all of
        # its firings would be model moves; when its role has no slot in
        # the final marking either, minting it is pure cost and the search
        # skips those bindings (log-named fresh bindings remain).
        final_roles = {
            role
            for place, _tok, _c in self.work.final.tokens
            for role in dict(self.net.place_type)[place]
        }
        self.canonical_mint_roles = frozenset(final_roles)

        # Per-transition net structure, so the hot path never rescans arcs.
        self.t_inputs: dict[str, tuple] = {}
        self.t_outputs: dict[str, tuple] = {}
        self.t_vars_seq: dict[str, tuple[str, ...]] = {}
        self.t_fresh: dict[str, tuple[str, ...]] = {}
        vs_all = self.net.vars()
        for t in self.net.transitions:
            self.t_inputs[t] = tuple(self.net.inputs(t))
            self.t_outputs[t] = tuple(self.net.outputs(t))
            self.t_vars_seq[t] = self.net.transition_vars(t)
            self.t_fresh[t] = tuple(
                v for v in self.t_vars_seq[t] if vs_all[v].fresh
            )

        # Integer costs on the common grid.
        def to_int(value: Fraction) -> int:
            scaled = value * self.scale
            assert scaled.denominator == 1
            return scaled.numerator

        self.int_eps = to_int(eps)
        self.int_eps2 = to_int(eps * eps)
        self.int_log_w = to_int(params.log_weight)
        self.int_model_w = to_int(params.model_weight)

        self.t_kind: dict[str, str] = {}
        self.t_model_cost: dict[str, int] = {}
        self.t_sync_slack: dict[str, int] = {}
        for t in self.net.transitions:
            size = len(self.net.transition_vars(t))
            vc = self.relaxed_model.var_count(t) if self.relaxed_model else size
            if t in self.correlation:
                kind = "correlation_silent"
            elif t in self.projected:
                kind = "relaxed_model"
            else:
                kind = "model"
            self.t_kind[t] = kind
            slack = max(vc - size, 0) * self.int_eps
            self.t_sync_slack[t] = slack
            if kind == "correlation_silent" or self.labels[t] is None:
                self.t_model_cost[t] = self.int_eps2
            elif params.scheme == RELAXED:
                self.t_model_cost[t] = size * self.int_model_w + slack
            else:
                self.t_model_cost[t] = self.int_model_w

        # Per-object predecessor / incomparability indexes for readiness,
        # mapped to event positions for tuple-indexed residues.
        self.obj_preds: dict[str, dict[str, tuple[int, ...]]] = {}
        self.obj_incomparable: dict[str, dict[str, tuple[int, ...]]] = {}
        for eid, event in self.events.items():
            preds: dict[str, list[int]] = {}
            inc: dict[str, list[int]] = {}
            for o in event.objects.support():
                if o in self.multi_copy_objects:
                    inc_target = None
                else:
                    inc_target = inc.setdefault(o, [])
                for other_id, other in self.events.items():
                    if other_id == eid or o not in other.objects.support():
                        continue
                    if self.order.lt(other_id, eid):
                        preds.setdefault(o, []).append(self.index_of[other_id])
                    elif inc_target is not None and not self.order.lt(eid, other_id):
                        inc_target.append(self.index_of[other_id])
            self.obj_preds[eid] = {o: tuple(v) for o, v in preds.items()}
            self.obj_incomparable[eid] = {o: tuple(v) for o, v in inc.items() if v}
        self.preds_idx = {
            eid: tuple(self.index_of[x] for x in self.order.predecessors(eid))
            for eid in self.event_ids
        }

        observed = {n for e in log.events for n in e.objects.support()}
        if strict_final:
            self.ignorable: frozenset[str] = frozenset()
        else:
            self.ignorable = frozenset(
                n
                for n in universe.objects.support()
                if n not in observed and n not in universe.persistent_objects()
            )

        self._mode_cache: dict[tuple[Marking, str], tuple] = {}
        self._fire_cache: dict[tuple[Marking, str, Mode], Marking] = {}
        self._model_succ_cache: dict[Marking, tuple] = {}
        self._marking_info: dict[Marking, tuple] = {}
        self._residue_info: dict[tuple, tuple] = {}
        self._h_cache: dict[tuple, int] = {}
        self._prepare_heuristic()

    # -- heuristic precomputation ------------------------------------------

    def _prepare_heuristic(self) -> None:
        """Object-conservation lower bounds.

        In a typed net with identifiers an object enters a marking only
        through a fresh variable, and its copy count changes only through
        firings whose arcs are unbalanced for its role.  Both observations
        give admissible per-state charges: absent-but-needed objects must
        be minted (or their event parts logged instead), and surplus
        copies must leave through copy-reducing firings not covered by the
        remaining synchronizations.
        """
        net = self.net
        vs = net.vars()
        roles = sorted({v.role for v in net.variables})

        self.copy_delta: dict[str, dict[str, int]] = {}
        fresh_counts: dict[str, dict[str, int]] = {}
        for t in net.transitions:
            delta: dict[str, int] = {}
            for _, seqs in net.inputs(t):
                for seq in seqs:
                    for v in seq:
                        delta[vs[v].role] = delta.get(vs[v].role, 0) + 1
            for _, seqs in net.outputs(t):
                for seq in seqs:
                    for v in seq:
                        delta[vs[v].role] = delta.get(vs[v].role, 0) - 1
            self.copy_delta[t] = delta
            fresh: dict[str, int] = {}
            for v in net.transition_vars(t):
                if vs[v].fresh:
                    fresh[vs[v].role] = fresh.get(vs[v].role, 0) + 1
            if fresh:
                fresh_counts[t] = fresh

        huge = 10**12
        self.mint_floor: dict[str, int] = {}
        self.reduce_floor: dict[str, int] = {}
        for role in roles:
            mint = [
                self.t_model_cost[t] // c
                for t, fresh in fresh_counts.items()
                for r, c in fresh.items()
                if r == role
            ]
            self.mint_floor[role] = min(mint) if mint else huge
            reducers = [
                self.t_model_cost[t] // d
                for t, delta in self.copy_delta.items()
                if (d := delta.get(role, 0)) > 0
            ]
            self.reduce_floor[role] = min(reducers) if reducers else 0

        mint_activities: dict[str, set[str]] = {}
        for t, fresh in fresh_counts.items():
            lab = self.labels[t]
            if lab is not None:
                for role in fresh:
                    mint_activities.setdefault(role, set()).add(lab)
        self.mint_event_idx: dict[str, tuple[int, ...]] = {}
        self.sync_reduction: list[dict[str, int]] = []
        for eid in self.event_ids:
            event = self.events[eid]
            best: dict[str, int] = {}
            for t in self.by_activity.get(event.activity, ()):
                for role, d in self.copy_delta[t].items():
                    if d > best.get(role, 0):
                        best[role] = d
            self.sync_reduction.append(best)
            for o in event.objects.support():
                role = self.universe.role_of(o)
                if event.activity in mint_activities.get(role, set()):
                    self.mint_event_idx.setdefault(o, ())
                    self.mint_event_idx[o] = self.mint_event_idx[o] + (self.index_of[eid],)

        self.final_copies: dict[str, int] = {}
        types = net.types()
        for place, token, count in self.work.final.tokens:
            for role in types[place]:
                self.final_copies[role] = self.final_copies.get(role, 0) + count
        self.heuristic_roles = tuple(r for r in roles if self.reduce_floor.get(r, 0) > 0)
        self.obj_charge = {
            r: min(self.int_log_w, self.mint_floor[r], self.scale) for r in roles
        }
        self._prepare_enabler_needs(fresh_counts)

    def _prepare_enabler_needs(self, fresh_counts: dict[str, dict[str, int]]) -> None:
        """For (activity, role): which earlier activities must have routed an
        object of that role into the activity's input places.  Tokens can
        only enter those places through the collected producer labels when
        no silent path reaches back to the initial marking or a fresh
        variable, so a missing enabler costs at least one model move."""
        net = self.net
        vs = net.vars()
        types = net.types()
        initial_places = {p for p, _, _ in self.work.initial.tokens}
        producers: dict[str, list[str]] = {}
        for (src, dst), _seqs in net.arcs:
            if src in net.transitions:
                producers.setdefault(dst, []).append(src)

        def trace(place: str, role: str, seen: frozenset[str]) -> frozenset[str] | None:
            """Labels guarding token entry of ``role`` into ``place``;
            None when a free path (initial marking or minting) exists."""
            if place in initial_places:
                return None
            labels: set[str] = set()
            for t in producers.get(place, ()):
                out_seqs = dict(net.arcs)[(t, place)]
                role_vars = [v for seq in out_seqs for v in seq if vs[v].role == role]
                if not role_vars:
                    continue
                if any(vs[v].fresh for v in role_vars):
                    return None
                lab = self.labels[t]
                if lab is not None:
                    labels.add(lab)
                    continue
                for src_place, in_seqs in net.inputs(t):
                    if role not in types[src_place] or src_place in seen:
                        continue
                    deeper = trace(src_place, role, seen | {src_place})
                    if deeper is None:
                        return None
                    labels |= deeper
            return frozenset(labels)

        # Enabler floors only make sense for activities whose transitions
        # neither mint nor change copy counts (no overlap with the other
        # heuristic terms).
        def neutral(activity: str) -> bool:
            for t in self.by_activity.get(activity, ()):
                if t in fresh_counts:
                    return False
                if any(d != 0 for d in self.copy_delta[t].values()):
                    return False
            return True

        self.enabler_needs: dict[tuple[str, str], tuple[frozenset[str], tuple[str, ...], int]] = {}
        activities = {e.activity for e in self.events.values()} & set(self.by_activity)
        for activity in activities:
            roles_used: set[str] = set()
            for t in self.by_activity[activity]:
                for v in net.transition_vars(t):
                    roles_used.add(vs[v].role)
            for role in roles_used:
                pre_places: set[str] = set()
                per_transition: list[frozenset[str] | None] = []
                for t in self.by_activity[activity]:
                    need: frozenset[str] | None = frozenset()
                    for place, _seqs in net.inputs(t):
                        if role not in types[place]:
                            continue
                        pre_places.add(place)
                        got = trace(place, role, frozenset({place}))
                        if got is None:
                            need = None
                            break
                        need = need | got
                    per_transition.append(need)
                if any(n is None or not n for n in per_transition):
                    continue
                union: set[str] = set()
                for n in per_transition:
                    union |= n
                if not union or not all(neutral(a) for a in union):
                    continue
                floor = min(
                    self.t_model_cost[t] // max(len(net.transition_vars(t)), 1)
                    for a in union
                    for t in self.by_activity[a]
                )
                if floor > 0:
                    self.enabler_needs[(activity, role)] = (
                        frozenset(union),
                        tuple(sorted(pre_places)),
                        floor,
                    )

        # Static per-event view: for each needing object, the places that
        # would satisfy the need and the events that could still enable it.
        need_ids: dict[frozenset[str], int] = {}
        self.event_enabler_info: list[tuple] = []
        for i, eid in enumerate(self.event_ids):
            event = self.events[eid]
            rows = []
            for o in sorted(event.objects.support()):
                need = self.enabler_needs.get((event.activity, self.role_name[o]))
                if need is None:
                    continue
                enablers, pre_places, floor = need
                key = need_ids.setdefault(enablers, len(need_ids))
                coverers = tuple(
                    j
                    for j, other_id in enumerate(self.event_ids)
                    if j != i
                    and self.events[other_id].activity in enablers
                    and o in self.events[other_id].objects.support()
                    and not self.order.lt(eid, other_id)
                )
                rows.append((o, key, floor, pre_places, coverers))
            self.event_enabler_info.append(tuple(rows))

    def marking_info(
        self, marking: Marking
    ) -> tuple[frozenset[str], dict[str, int], dict[str, frozenset[str]]]:
        cached = self._marking_info.get(marking)
        if cached is None:
            types = self.net.types()
            copies: dict[str, int] = {}
            names: set[str] = set()
            place_names: dict[str, set[str]] = {}
            for place, token, count in marking.tokens:
                names.update(token)
                place_names.setdefault(place, set()).update(token)
                for role in types[place]:
                    copies[role] = copies.get(role, 0) + count
            cached = (
                frozenset(names),
                copies,
                {p: frozenset(v) for p, v in place_names.items()},
            )
            self._marking_info[marking] = cached
        return cached

    def residue_info(self, residues) -> tuple:
        """(base log charge, needed objects, active indexes, reductions)."""
        cached = self._residue_info.get(residues)
        if cached is None:
            relaxed_scheme = self.params.scheme == RELAXED
            h_act = 0
            unmatched: set[str] = set()
            needed: set[str] = set()
            active: list[int] = []
            reductions: dict[str, int] = {}
            for i, entries in enumerate(residues):
                if not entries:
                    continue
                active.append(i)
                event = self.events[self.event_ids[i]]
                if event.activity not in self.by_activity:
                    if relaxed_scheme:
                        h_act += sum(c for _, c in entries) * self.int_log_w
                    else:
                        h_act += self.int_log_w
                    unmatched.update(n for n, _ in entries)
                else:
                    needed.update(n for n, _ in entries)
                for role, d in self.sync_reduction[i].items():
                    reductions[role] = reductions.get(role, 0) + d
            cached = (h_act, frozenset(needed - unmatched), tuple(active), reductions)
            self._residue_info[residues] = cached
        return cached

    def heuristic(self, residues, marking: Marking) -> int:
        key = (residues, marking)
        cached = self._h_cache.get(key)
        if cached is not None:
            return cached
        h_act, needed, active, reductions = self.residue_info(residues)
        names, copies, place_names = self.marking_info(marking)
        h = h_act
        for o in needed:
            if o in names:
                continue
            if any(i in active for i in self.mint_event_idx.get(o, ())):
                continue
            h += self.obj_charge[self.role_name[o]]
        for role in self.heuristic_roles:
            excess = copies.get(role, 0) - self.final_copies.get(role, 0)
            if excess > 0:
                shortfall = excess - reductions.get(role, 0)
                if shortfall > 0:
                    h += shortfall * self.reduce_floor[role]
        if self.enabler_needs:
            h += self._enabler_charge(residues, active, place_names)
        self._h_cache[key] = h
        return h

    def _enabler_charge(self, residues, active, place_names) -> int:
        """Events that can only synchronize after a labeled enabler firing
        pay for the shortfall: each pending demand for an (enabler, object)
        pair needs its own enabling firing, and the remaining log events
        can supply at most one each.  Uncovered demands cost at least a
        model move or the demander's own logged object part."""
        demands: dict[tuple[int, str], int] = {}
        supplies: dict[tuple[int, str], set[int]] = {}
        unit: dict[tuple[int, str], int] = {}
        for i in active:
            info = self.event_enabler_info[i]
            if not info:
                continue
            present = dict(residues[i])
            for o, key, floor, pre_places, coverers in info:
                if o not in present:
                    continue
                if any(o in place_names.get(pl, ()) for pl in pre_places):
                    continue
                pair = (key, o)
                demands[pair] = demands.get(pair, 0) + 1
                unit[pair] = min(floor, self.int_log_w)
                pool = supplies.setdefault(pair, set())
                for j in coverers:
                    if j not in pool and _entries_count(residues[j], o) > 0:
                        pool.add(j)
        total = 0
        for pair, count in demands.items():
            shortfall = count - len(supplies.get(pair, ()))
            if shortfall > 0:
                total += shortfall * unit[pair]
        return total

    # -- cached net queries ---------------------------------------------------

    def modes(self, marking: Marking, t: str):
        """Enabled modes with the bound-object multiset, cached per marking."""
        key = (marking, t)
        cached = self._mode_cache.get(key)
        if cached is not None:
            return cached
        demands = [
            (place, seq, marking.at(place))
            for place, seqs in self.t_inputs[t]
            for seq in seqs
        ]
        tvars = self.t_vars_seq[t]
        fresh_vars = self.t_fresh[t]
        results: list[tuple[Mode, tuple]] = []
        seen: set = set()

        def emit(binding: dict[str, str]) -> None:
            if fresh_vars:
                used = marking.object_names() | frozenset(binding.values())
                options = []
                for v in fresh_vars:
                    role = self.role_of_var[v]
                    cands = [
                        c
                        for c in self.fresh_candidates
                        if c not in used and self.role_name.get(c) == role
                    ]
                    if role in self.canonical_mint_roles or not cands:
                        cands.append(
                            canonical_fresh_name(role, used | frozenset(self.role_name))
                        )
                    options.append(sorted(set(cands)))
                for combo in itertools.product(*options):
                    if len(set(combo)) != len(combo):
                        continue
                    full = dict(binding)
                    for v, name in zip(fresh_vars, combo):
                        full[v] = name
                    key2 = tuple(sorted(full.items()))
                    if key2 not in seen:
                        seen.add(key2)
                        mode = Mode(key2)
                        counts: dict[str, int] = {}
                        for v in tvars:
                            counts[full[v]] = counts.get(full[v], 0) + 1
                        results.append((mode, tuple(sorted(counts.items()))))
            else:
                key2 = tuple(sorted(binding.items()))
                if key2 not in seen:
                    seen.add(key2)
                    mode = Mode(key2)
                    counts = {}
                    for v in tvars:
                        counts[binding[v]] = counts.get(binding[v], 0) + 1
                    results.append((mode, tuple(sorted(counts.items()))))

        def assign(i: int, binding: dict[str, str], taken: dict) -> None:
            if i == len(demands):
                emit(binding)
                return
            place, seq, available = demands[i]
            for tok in available:
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

        assign(0, {}, {})
        cached = tuple(sorted(results, key=lambda pair: pair[0].binding))
        self._mode_cache[key] = cached
        return cached

    def fire(self, marking: Marking, t: str, mode: Mode) -> Marking:
        key = (marking, t, mode)
        result = self._fire_cache.get(key)
        if result is None:
            binding = dict(mode.binding)
            counts = marking.counts()
            for place, seqs in self.t_inputs[t]:
                for seq in seqs:
                    tok = tuple(binding[v] for v in seq)
                    counts[(place, tok)] = counts.get((place, tok), 0) - 1
            for place, seqs in self.t_outputs[t]:
                for seq in seqs:
                    tok = tuple(binding[v] for v in seq)
                    counts[(place, tok)] = counts.get((place, tok), 0) + 1
            if any(c < 0 for c in counts.values()):
                raise NotEnabled(f"{t} not enabled under {mode}")
            result = Marking(tuple((p, tok, c) for (p, tok), c in counts.items() if c > 0))
            self._fire_cache[key] = result
        return result

    def model_successors(self, marking: Marking):
        """Model-only moves are residue-independent; cache per marking."""
        cached = self._model_succ_cache.get(marking)
        if cached is None:
            out = []
            for t in sorted(self.net.transitions):
                kind = self.t_kind[t]
                activity = self.labels[t]
                cost = self.t_model_cost[t]
                for mode, _objs in self.modes(marking, t):
                    out.append((kind, activity, t, mode, cost, self.fire(marking, t, mode)))
            cached = tuple(out)
            self._model_succ_cache[marking] = cached
        return cached

    def log_cost(self, size: int) -> int:
        if self.params.scheme == RELAXED:
            return size * self.int_log_w
        return self.int_log_w

    def initial_residues(self):
        return tuple(self.events[eid].objects.entries for eid in self.event_ids)

    def goal(self, residues, marking: Marking) -> bool:
        if any(residues):
            return False
        return final_marking_matches(self.work, marking, ignorable=self.ignorable)

    def to_fraction(self, value: int) -> Fraction:
        return Fraction(value, self.scale)


class _Searcher:
    def __init__(self, problem: _Problem, bound: int | None = None) -> None:
        self.p = problem
        self.bound = bound

    # -- readiness ---------------------------------------------------------

    def object_ready(self, residues, eid: str, obj: str) -> bool:
        for idx in self.p.obj_preds[eid].get(obj, ()):
            if _entries_count(residues[idx], obj) > 0:
                return False
        return True

    def sync_guard(self, residues, eid: str, obj: str) -> bool:
        """Block synchronizing an object whose trace already advanced
        through an order-incomparable event: with a single token instance
        the firing order would add per-object order the log does not
        have.  Multi-copy objects run on parallel instances and are
        indexed out; the relaxed-log check at the goal protects them."""
        p = self.p
        for idx in p.obj_incomparable[eid].get(obj, ()):
            original = p.events[p.event_ids[idx]].objects.count(obj)
            if original and _entries_count(residues[idx], obj) < original:
                return False
        return True

    def preds_consumed(self, residues, eid: str) -> bool:
        """All predecessors fully consumed.  Synchronous moves require
        this even in relaxed mode: it keeps matched pairs from ever
        contradicting the two orders."""
        return all(not residues[idx] for idx in self.p.preds_idx[eid])

    def fragment_ok(self, residues, eid: str, frag: Entries, *, sync: bool) -> bool:
        residue = dict(residues[self.p.index_of[eid]])
        for o, c in frag:
            if residue.get(o, 0) != c:
                return False
            if not sync and not self.object_ready(residues, eid, o):
                return False
            if sync and not self.sync_guard(residues, eid, o):
                return False
        return True

    # -- expansion -----------------------------------------------------------

    def expand(self, residues, marking: Marking):
        p = self.p
        for eid in p.event_ids:
            entries = residues[p.index_of[eid]]
            if not entries:
                continue
            event = p.events[eid]
            whole = entries == event.objects.entries
            if p.relaxed:
                yield from self._log_moves_relaxed(residues, eid, entries, whole)
                yield from self._sync_moves(residues, marking, eid, entries, whole)
            elif self.preds_consumed(residues, eid):
                yield from self._regular_event_moves(residues, marking, eid)
        for kind, activity, t, mode, cost, nxt in p.model_successors(marking):
            yield (kind, activity, None, None, t, mode, None, cost, residues, nxt)

    def _consume(self, residues, eid: str, frag: Entries):
        idx = self.p.index_of[eid]
        left = _entries_subtract(residues[idx], frag)
        return residues[:idx] + (left,) + residues[idx + 1 :]

    def _regular_event_moves(self, residues, marking, eid):
        p = self.p
        event = p.events[eid]
        entries = event.objects.entries
        consumed = self._consume(residues, eid, entries)
        yield (
            "log", event.activity, eid, entries, None, None, None,
            p.log_cost(len(event.objects)), consumed, marking,
        )
        for t in p.by_activity.get(event.activity, ()):
            for mode, objs in p.modes(marking, t):
                if objs != entries:
                    continue
                yield (
                    "sync", event.activity, eid, entries, t, mode, None,
                    0, consumed, p.fire(marking, t, mode),
                )

    def _log_moves_relaxed(self, residues, eid, entries, whole):
        p = self.p
        event = p.events[eid]
        support = [n for n, _ in entries]
        ready = [o for o in support if self.object_ready(residues, eid, o)]
        fragments: list[Entries] = []
        if len(ready) == len(support):
            fragments.append(entries)
        if len(support) > 1:
            for o in ready:
                fragments.append(((o, _entries_count(entries, o)),))
            if 1 < len(ready) < len(support):
                fragments.append(tuple((o, c) for o, c in entries if o in ready))
        seen = set()
        for frag in fragments:
            if frag in seen or not frag:
                continue
            seen.add(frag)
            kind = "log" if (whole and frag == event.objects.entries) else "relaxed_log"
            size = sum(c for _, c in frag)
            yield (
                kind, event.activity, eid, frag, None, None, None,
                p.log_cost(size), self._consume(residues, eid, frag), None,
            )

    def _sync_moves(self, residues, marking, eid, entries, whole):
        p = self.p
        if not self.preds_consumed(residues, eid):
            return
        event = p.events[eid]
        for t in p.by_activity.get(event.activity, ()):
            projected = t in p.projected
            slack = p.t_sync_slack[t]
            for mode, objs in p.modes(marking, t):
                if _entries_leq(objs, entries) and self.fragment_ok(
                    residues, eid, objs, sync=True
                ):
                    kind = (
                        "sync"
                        if (not projected and whole and objs == event.objects.entries)
                        else "relaxed_sync"
                    )
                    yield (
                        kind, event.activity, eid, objs, t, mode, None,
                        slack, self._consume(residues, eid, objs),
                        p.fire(marking, t, mode),
                    )
                if p.substitutable:
                    yield from self._substitute_moves(
                        residues, marking, eid, entries, t, mode, objs
                    )

    def _substitute_moves(self, residues, marking, eid, entries, t, mode, objs):
        p = self.p
        event = p.events[eid]
        role_by_name = {obj: p.role_of_var[v] for v, obj in mode.binding}
        model_parts: dict[str, dict[str, int]] = {}
        for name, count in objs:
            model_parts.setdefault(role_by_name[name], {})[name] = count
        residue_parts: dict[str, dict[str, int]] = {}
        for name, count in entries:
            residue_parts.setdefault(p.role_name[name], {})[name] = count

        fixed: dict[str, int] = {}
        choices: list[list[dict[str, int]]] = []
        sub_roles: list[str] = []
        for role, part in sorted(model_parts.items()):
            have = residue_parts.get(role, {})
            exact = all(have.get(name, 0) >= count for name, count in part.items())
            if role not in p.substitutable or exact:
                if not exact:
                    return
                for name, count in part.items():
                    fixed[name] = fixed.get(name, 0) + count
                continue
            need = sum(part.values())
            pool = {name: count for name, count in have.items() if name not in part}
            options = _pick_full_copies(pool, need)
            if not options:
                return
            sub_roles.append(role)
            choices.append(options)
        if not sub_roles:
            return
        slack = p.t_sync_slack[t]
        roles = frozenset(sub_roles)
        for combo in itertools.product(*choices):
            frag_counts = dict(fixed)
            slots = 0
            for chosen in combo:
                for name, count in chosen.items():
                    frag_counts[name] = frag_counts.get(name, 0) + count
                    slots += count
            frag = tuple(sorted(frag_counts.items()))
            if not _entries_leq(frag, entries):
                continue
            if not self.fragment_ok(residues, eid, frag, sync=True):
                continue
            yield (
                "substitute_sync", event.activity, eid, frag, t, mode, roles,
                slots * p.scale + slack, self._consume(residues, eid, frag),
                p.fire(marking, t, mode),
            )

    # -- main loop -----------------------------------------------------------

    def run(self) -> Alignment:
        """Best-first search with lazily evaluated heuristics.

        Children are pushed with the parent's f-value as a valid lower
        bound; the full heuristic is evaluated once per state at pop time
        and the entry re-queued if it rose.  This keeps the expensive
        bound computation off the push path.
        """
        p = self.p
        start_residues = p.initial_residues()
        start = _Node((start_residues, p.work.initial), 0, 0, 0, None, None)
        counter = itertools.count()
        f0 = p.heuristic(start_residues, p.work.initial)
        heap: list[tuple] = [(f0, 0, 0, 0, next(counter), start, True)]
        best: dict = {}
        expanded = 0
        bound = self.bound
        while heap:
            f, deviating, relaxed, left, _, node,evaluated = heapq.heappop(heap)
            residues, marking = node.state
            key = node.state
            rank = (node.g, node.deviating, node.relaxed)
            prior = best.get(key)
            if prior is not None and prior <= rank:
                continue
            if not evaluated:
                f_true = node.g + p.heuristic(residues, marking)
                if bound is not None and f_true > bound:
                    continue
                if f_true > f:
                    heapq.heappush(
                        heap,
                        (f_true, deviating, relaxed, left, next(counter), node, True),
                    )
                    continue
            best[key] = rank
            if p.goal(residues, marking):
                alignment = self._materialize(node)
                if not p.relaxed or _relaxed_log_ok(p, alignment):
                    return alignment
                continue
            expanded += 1
            if expanded > p.budget:
                raise BudgetExceeded(f"state budget of {p.budget} exhausted")
            for cand in self.expand(residues, marking):
                kind = cand[0]
                cost = cand[7]
                new_residues = cand[8]
                new_marking = cand[9] if cand[9] is not None else marking
                g = node.g + cost
                push_f = f if f > g else g
                if bound is not None and push_f > bound:
                    continue
                new_key = (new_residues, new_marking)
                new_deviating = node.deviating + (1 if kind in _DEVIATING else 0)
                new_relaxed = node.relaxed + (1 if kind in _RELAXING else 0)
                new_rank = (g, new_deviating, new_relaxed)
                prior = best.get(new_key)
                if prior is not None and prior <= new_rank:
                    continue
                child = _Node(
                    new_key, g, new_deviating, new_relaxed, node, self._blueprint(cand)
                )
                # Among equal cost and tie-break counters, prefer states
                # with less residue left: goals surface sooner.
                new_left = sum(len(r) for r in new_residues)
                heapq.heappush(
                    heap,
                    (push_f, new_deviating, new_relaxed, new_left, next(counter), child, False),
                )
        raise NoAlignment("final marking unreachable while consuming the log")

    def _blueprint(self, cand) -> Blueprint:
        kind, activity, eid, frag, t, mode, roles, cost = cand[:8]
        return Blueprint(
            kind=kind,
            activity=activity,
            event=eid,
            objects=ObjectMultiset(frag) if frag is not None else None,
            transition=t,
            mode=mode,
            substituted_roles=roles if roles is not None else frozenset(),
            cost=self.p.to_fraction(cost),
        )

    def _materialize(self, node: _Node) -> Alignment:
        p = self.p
        return assemble_alignment(p.work, p.order, p.events, node.path())


def _pick_full_copies(pool: dict[str, int], need: int) -> list[dict[str, int]]:
    """Sub-multisets of ``pool`` taking all copies per chosen name and
    summing to exactly ``need``."""
    names = sorted(pool)
    out: list[dict[str, int]] = []

    def rec(i: int, remaining: int, chosen: dict[str, int]) -> None:
        if remaining == 0:
            out.append(dict(chosen))
            return
        if i >= len(names):
            return
        rec(i + 1, remaining, chosen)
        name = names[i]
        if pool[name] <= remaining:
            chosen[name] = pool[name]
            rec(i + 1, remaining - pool[name], chosen)
            del chosen[name]

    rec(0, need, {})
    return out


def _relaxed_log_ok(p: _Problem, alignment: Alignment) -> bool:
    from .verify import fragment_log_view

    try:
        candidate = fragment_log_view(alignment, replace(p.log, universe=p.universe), p.universe)
    except Exception:
        return False
    original = replace(p.log, universe=p.universe)
    return is_relaxed_version(original, candidate)


def _reprice_for_relaxed(p: _Problem, alignment: Alignment) -> int:
    """Cost of a regular alignment's moves under the relaxed scheme; every
    regular alignment is also a valid relaxed alignment, so this is an
    upper bound on the relaxed optimum (on the integer cost grid)."""
    total = 0
    for m in alignment.moves:
        if m.kind == "sync":
            continue
        if m.kind == "log":
            total += len(m.objects) * p.int_log_w
        elif m.activity is None:
            total += p.int_eps2
        else:
            total += len(m.firing.mode.binding) * p.int_model_w
    return total


# -- public entry points -------------------------------------------------------


def align(
    log: SystemLog,
    model: ProcessModel,
    params: CostParams | None = None,
    *,
    strict_final: bool = False,
    max_states: int | None = None,
) -> Alignment:
    """Cost-optimal regular alignment under the standard cost scheme."""
    params = params or CostParams.standard()
    if params.scheme != STANDARD:
        params = replace(params, scheme=STANDARD)
    problem = _Problem(
        log,
        model,
        params,
        relaxed=False,
        substitutable_roles=frozenset(),
        strict_final=strict_final,
        max_states=max_states,
    )
    return _Searcher(problem).run()


def relaxed_align(
    log: SystemLog,
    model: ProcessModel,
    params: CostParams | None = None,
    substitutable_roles: Iterable[str] = (),
    *,
    strict_final: bool = False,
    max_states: int | None = None,
) -> Alignment:
    """Cost-optimal relaxed alignment against the relaxed model, with the
    log relaxation decided lazily during the search."""
    params = params or CostParams.relaxed()
    if params.scheme != RELAXED:
        params = replace(params, scheme=RELAXED)
    problem = _Problem(
        log,
        model,
        params,
        relaxed=True,
        substitutable_roles=frozenset(substitutable_roles),
        strict_final=strict_final,
        max_states=max_states,
    )
    bound: int | None = None
    try:
        regular = align(
            log,
            model,
            CostParams.standard(
                epsilon=params.epsilon,
                log_weight=params.log_weight,
                model_weight=params.model_weight,
            ),
            strict_final=strict_final,
            max_states=max_states,
        )
        bound = _reprice_for_relaxed(problem, regular)
    except (NoAlignment, BudgetExceeded):
        bound = None
    return _Searcher(problem, bound=bound).run()
