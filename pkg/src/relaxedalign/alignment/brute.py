"""Exhaustive branch-and-bound alignment oracle, for tests only.

The oracle re-derives candidate moves directly from the move definitions
and explores all simple paths through the (residues, marking) space,
keeping the cheapest completed alignment.  It shares only the net firing
semantics and the final assembly step with the engine; the enumeration
and optimization strategy are purposely different.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import replace
from fractions import Fraction
from typing import Iterable

from ..errors import BudgetExceeded, NoAlignment
from ..logs import SystemLog
from ..objects import ObjectMultiset
from ..pnid import (
    Marking,
    ProcessModel,
    TransitionFiring,
    enabled_modes,
    fire,
    final_marking_matches,
)
from ..relaxed_model import build_relaxed_model
from .assemble import Blueprint, assemble_alignment
from .costs import RELAXED, CostParams, move_cost
from .moves import Alignment
from .search import merge_universes

Residues = tuple[tuple[str, tuple[tuple[str, int], ...]], ...]


class _Oracle:
    def __init__(
        self,
        log: SystemLog,
        model: ProcessModel,
        params: CostParams,
        bound: int,
        relaxed: bool,
        substitutable: frozenset[str],
        strict_final: bool,
    ) -> None:
        self.params = params
        self.bound = bound
        self.relaxed = relaxed
        self.substitutable = substitutable
        universe = merge_universes(model.universe, log.universe)
        self.universe = universe
        base = replace(model, universe=universe)
        self.work = build_relaxed_model(base).model if relaxed else base
        self.correlation = (
            build_relaxed_model(base).correlation_transitions if relaxed else frozenset()
        )
        prov = dict(self.work.net.provenance)
        self.projected = {
            t
            for t in self.work.net.transitions
            if t in prov and prov[t][0] in self.work.net.transitions
        } - self.correlation
        self.base_vars = {
            t: len(base.net.transition_vars(dict(prov).get(t, (t, None))[0]))
            if dict(prov).get(t, (t, None))[0] in base.net.transitions
            else len(self.work.net.transition_vars(t))
            for t in self.work.net.transitions
        }
        self.log = replace(log, universe=universe)
        self.events = self.log.event_map()
        self.order = self.log.order
        self.labels = self.work.net.labels()
        self.fresh = tuple(sorted({n for e in log.events for n in e.objects.support()}))
        observed = {n for e in log.events for n in e.objects.support()}
        self.ignorable = (
            frozenset()
            if strict_final
            else frozenset(
                n
                for n in universe.objects.support()
                if n not in observed and n not in universe.persistent_objects()
            )
        )
        self.visited = 0
        self.best_cost: Fraction | None = None
        self.best_path: list[Blueprint] | None = None

    # -- bookkeeping -------------------------------------------------------

    def residue(self, residues: Residues, eid: str) -> ObjectMultiset:
        return ObjectMultiset(dict(residues)[eid])

    def set_residue(self, residues: Residues, eid: str, value: ObjectMultiset) -> Residues:
        return tuple((k, value.entries if k == eid else v) for k, v in residues)

    def object_ready(self, residues: Residues, eid: str, obj: str) -> bool:
        for other, entries in residues:
            if other == eid:
                continue
            if self.order.lt(other, eid) and obj in self.events[other].objects.support():
                if ObjectMultiset(entries).count(obj) > 0:
                    return False
        return True

    def object_guard(self, residues: Residues, eid: str, obj: str) -> bool:
        for other, entries in residues:
            if other == eid or self.order.comparable(other, eid):
                continue
            original = self.events[other].objects.count(obj)
            if original and ObjectMultiset(entries).count(obj) < original:
                return False
        return True

    def cost_of(self, bp: Blueprint, substituted_slots: int = 0) -> Fraction:
        from .moves import Move

        firing = (
            TransitionFiring(id="?", transition=bp.transition, mode=bp.mode)
            if bp.transition is not None
            else None
        )
        probe = Move(
            id="?",
            kind=bp.kind,
            activity=bp.activity,
            event=bp.event,
            objects=bp.objects,
            firing=firing,
            substituted_roles=bp.substituted_roles,
        )
        var_count = (
            self.base_vars[bp.transition]
            if bp.transition is not None
            else (len(bp.objects) if bp.objects is not None else 0)
        )
        return move_cost(probe, self.params, var_count, substituted_slots=substituted_slots)

    # -- candidate enumeration ----------------------------------------------

    def candidates(self, residues: Residues, marking: Marking):
        out = []
        for eid in sorted(self.events):
            residue = self.residue(residues, eid)
            if residue.is_empty():
                continue
            event = self.events[eid]
            whole = residue == event.objects
            frags = self._fragments(residues, eid, residue)
            for frag in frags:
                kind = "log" if (whole and frag == event.objects) else "relaxed_log"
                if not self.relaxed and kind != "log":
                    continue
                if not self.relaxed and not self._whole_ready(residues, eid):
                    continue
                bp = Blueprint(kind, event.activity, eid, frag, None, None, frozenset(), Fraction(0))
                bp = replace(bp, cost=self.cost_of(bp))
                out.append((bp, self.set_residue(residues, eid, residue.subtract(frag)), marking))
            out.extend(self._sync_candidates(residues, marking, eid, residue, whole))
        for t in sorted(self.work.net.transitions):
            kind = (
                "correlation_silent"
                if t in self.correlation
                else ("relaxed_model" if t in self.projected else "model")
            )
            if not self.relaxed and kind != "model":
                continue
            for mode in enabled_modes(self.work, marking, t, fresh_candidates=self.fresh):
                bp = Blueprint(kind, self.labels[t], None, None, t, mode, frozenset(), Fraction(0))
                bp = replace(bp, cost=self.cost_of(bp))
                firing = TransitionFiring(id="?", transition=t, mode=mode)
                out.append((bp, residues, fire(self.work, marking, firing)))
        return out

    def _whole_ready(self, residues: Residues, eid: str) -> bool:
        return all(
            self.residue(residues, other).is_empty()
            for other in self.order.predecessors(eid)
        )

    def _fragments(self, residues: Residues, eid: str, residue: ObjectMultiset):
        ready = [o for o in sorted(residue.support()) if self.object_ready(residues, eid, o)]
        frags: list[ObjectMultiset] = []
        if set(ready) == set(residue.support()):
            frags.append(residue)
        if self.relaxed and len(residue.support()) > 1:
            for o in ready:
                frags.append(ObjectMultiset.from_counts({o: residue.count(o)}))
            if 1 < len(ready) < len(residue.support()):
                frags.append(ObjectMultiset.from_counts({o: residue.count(o) for o in ready}))
        seen = set()
        unique = []
        for f in frags:
            if f not in seen and not f.is_empty():
                seen.add(f)
                unique.append(f)
        return unique

    def _sync_candidates(self, residues, marking, eid, residue, whole):
        event = self.events[eid]
        out = []
        for t in sorted(self.work.net.transitions):
            if self.labels[t] != event.activity:
                continue
            if not self.relaxed and t in self.projected:
                continue
            for mode in enabled_modes(self.work, marking, t, fresh_candidates=self.fresh):
                binding = mode.get()
                objs = ObjectMultiset.of(
                    *(binding[v] for v in self.work.net.transition_vars(t))
                )
                firing = TransitionFiring(id="?", transition=t, mode=mode)
                fits = (
                    objs.leq(residue)
                    and all(objs.count(o) == residue.count(o) for o in objs.support())
                    and all(self.object_ready(residues, eid, o) for o in objs.support())
                    and all(self.object_guard(residues, eid, o) for o in objs.support())
                )
                if fits:
                    if not self.relaxed:
                        if whole and objs == event.objects and self._whole_ready(residues, eid):
                            bp = Blueprint(
                                "sync", event.activity, eid, objs, t, mode, frozenset(), Fraction(0)
                            )
                            bp = replace(bp, cost=self.cost_of(bp))
                            out.append(
                                (bp, self.set_residue(residues, eid, residue.subtract(objs)),
                                 fire(self.work, marking, firing))
                            )
                    else:
                        kind = (
                            "sync"
                            if (t not in self.projected and whole and objs == event.objects)
                            else "relaxed_sync"
                        )
                        bp = Blueprint(
                            kind, event.activity, eid, objs, t, mode, frozenset(), Fraction(0)
                        )
                        bp = replace(bp, cost=self.cost_of(bp))
                        out.append(
                            (bp, self.set_residue(residues, eid, residue.subtract(objs)),
                             fire(self.work, marking, firing))
                        )
                if self.relaxed and self.substitutable:
                    out.extend(
                        self._substitutions(residues, marking, eid, residue, t, mode, objs)
                    )
        return out

    def _substitutions(self, residues, marking, eid, residue, t, mode, objs):
        event = self.events[eid]
        role_of = self.universe.role_of
        var_roles = {v.name: v.role for v in self.work.net.variables}
        role_by_name = {obj: var_roles[v] for v, obj in mode.binding}
        model_by_role: dict[str, dict[str, int]] = {}
        for n, c in objs.entries:
            model_by_role.setdefault(role_by_name[n], {})[n] = c
        residue_by_role: dict[str, dict[str, int]] = {}
        for n, c in residue.entries:
            residue_by_role.setdefault(role_of(n), {})[n] = c
        fixed: dict[str, int] = {}
        per_role_options: list[list[dict[str, int]]] = []
        sub_roles: list[str] = []
        for role, part in sorted(model_by_role.items()):
            have = residue_by_role.get(role, {})
            if all(have.get(n, 0) >= c for n, c in part.items()):
                for n, c in part.items():
                    fixed[n] = fixed.get(n, 0) + c
                continue
            if role not in self.substitutable:
                return []
            pool = {n: c for n, c in have.items() if n not in part}
            need = sum(part.values())
            opts = [
                dict(zip(combo, (pool[n] for n in combo)))
                for size in range(1, len(pool) + 1)
                for combo in itertools.combinations(sorted(pool), size)
                if sum(pool[n] for n in combo) == need
            ]
            if not opts:
                return []
            sub_roles.append(role)
            per_role_options.append(opts)
        if not sub_roles:
            return []
        out = []
        firing = TransitionFiring(id="?", transition=t, mode=mode)
        for combo in itertools.product(*per_role_options):
            counts = dict(fixed)
            for chosen in combo:
                for n, c in chosen.items():
                    counts[n] = counts.get(n, 0) + c
            frag = ObjectMultiset.from_counts(counts)
            if not frag.leq(residue):
                continue
            if not all(frag.count(o) == residue.count(o) for o in frag.support()):
                continue
            if not all(self.object_ready(residues, eid, o) for o in frag.support()):
                continue
            if not all(self.object_guard(residues, eid, o) for o in frag.support()):
                continue
            slots = sum(sum(c.values()) for c in combo)
            bp = Blueprint(
                "substitute_sync",
                event.activity,
                eid,
                frag,
                t,
                mode,
                frozenset(sub_roles),
                Fraction(0),
            )
            bp = replace(bp, cost=self.cost_of(bp, substituted_slots=slots))
            out.append(
                (bp, self.set_residue(residues, eid, residue.subtract(frag)),
                 fire(self.work, marking, firing))
            )
        return out

    # -- seeding upper bound -------------------------------------------------

    def seed_upper_bound(self) -> tuple[Fraction, list[Blueprint]] | None:
        """All-log-moves plus a cheapest silent/model completion, found by a
        Dijkstra over markings alone."""
        log_bps: list[Blueprint] = []
        order_ids = [eid for eid, _ in sorted(
            ((e, len(self.order.predecessors(e))) for e in self.events), key=lambda kv: (kv[1], kv[0])
        )]
        seq, _ = self.order.linear_extensions(limit=1)
        for eid in (seq[0] if seq else order_ids):
            event = self.events[eid]
            bp = Blueprint("log", event.activity, eid, event.objects, None, None, frozenset(), Fraction(0))
            log_bps.append(replace(bp, cost=self.cost_of(bp)))
        heap: list[tuple[Fraction, int, Marking, tuple]] = [
            (Fraction(0), 0, self.work.initial, ())
        ]
        seen: set[Marking] = set()
        counter = itertools.count(1)
        budget = self.bound
        while heap:
            cost, _, marking, path = heapq.heappop(heap)
            if marking in seen:
                continue
            seen.add(marking)
            if final_marking_matches(self.work, marking, ignorable=self.ignorable):
                total = sum((bp.cost for bp in log_bps), Fraction(0)) + cost
                return total, log_bps + list(path)
            budget -= 1
            if budget <= 0:
                return None
            for t in sorted(self.work.net.transitions):
                kind = (
                    "correlation_silent"
                    if t in self.correlation
                    else ("relaxed_model" if t in self.projected else "model")
                )
                if not self.relaxed and kind != "model":
                    continue
                for mode in enabled_modes(self.work, marking, t, fresh_candidates=self.fresh):
                    bp = Blueprint(kind, self.labels[t], None, None, t, mode, frozenset(), Fraction(0))
                    bp = replace(bp, cost=self.cost_of(bp))
                    firing = TransitionFiring(id="?", transition=t, mode=mode)
                    nxt = fire(self.work, marking, firing)
                    if nxt not in seen:
                        heapq.heappush(heap, (cost + bp.cost, next(counter), nxt, path + (bp,)))
        return None

    # -- exhaustive search -----------------------------------------------------

    def solve(self) -> Alignment:
        seeded = self.seed_upper_bound()
        if seeded is not None:
            self.best_cost, self.best_path = seeded
        start: Residues = tuple((e.id, e.objects.entries) for e in sorted(self.log.events, key=lambda e: e.id))
        self._dfs(start, self.work.initial, Fraction(0), [], {(start, self.work.initial)})
        if self.best_path is None:
            raise NoAlignment("oracle found no completed alignment")
        return assemble_alignment(self.work, self.order, self.events, self.best_path)

    def _dfs(self, residues, marking, g, path, on_path):
        self.visited += 1
        if self.visited > self.bound:
            raise BudgetExceeded(f"oracle budget of {self.bound} exhausted")
        if all(not entries for _, entries in residues) and final_marking_matches(
            self.work, marking, ignorable=self.ignorable
        ):
            if self.best_cost is None or g < self.best_cost:
                self.best_cost = g
                self.best_path = list(path)
            return
        for bp, new_residues, new_marking in self.candidates(residues, marking):
            new_g = g + bp.cost
            if self.best_cost is not None and new_g >= self.best_cost:
                continue
            key = (new_residues, new_marking)
            if key in on_path:
                continue
            on_path.add(key)
            path.append(bp)
            self._dfs(new_residues, new_marking, new_g, path, on_path)
            path.pop()
            on_path.discard(key)


def brute_force_align(
    log: SystemLog,
    model: ProcessModel,
    params: CostParams | None = None,
    bound: int = 200_000,
    *,
    relaxed: bool = False,
    substitutable_roles: Iterable[str] = (),
    strict_final: bool = False,
) -> Alignment:
    """Minimum-cost alignment by exhaustive enumeration (tests only)."""
    if params is None:
        params = CostParams.relaxed() if relaxed else CostParams.standard()
    if relaxed and params.scheme != RELAXED:
        params = replace(params, scheme=RELAXED)
    oracle = _Oracle(
        log,
        model,
        params,
        bound,
        relaxed,
        frozenset(substitutable_roles),
        strict_final,
    )
    return oracle.solve()
