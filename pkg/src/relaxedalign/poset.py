"""Finite strict-partial-order algebra.

Posets are stored transitively closed so comparability queries are set
lookups; the covering relation is derived on demand.  All values are
immutable and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CycleError

Pair = tuple[str, str]


def close_pairs(pairs: Iterable[Pair]) -> frozenset[Pair]:
    """Transitive closure of a set of ordered pairs.

    Raises CycleError if the closure would contain (x, x) or a mutual
    pair, i.e. the input is not consistent with any strict partial order.
    """
    succ: dict[str, set[str]] = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
        succ.setdefault(b, set())
    # Propagate reachability with a worklist; graphs here are small.
    changed = True
    while changed:
        changed = False
        for a, outs in succ.items():
            extra: set[str] = set()
            for b in outs:
                extra |= succ[b] - outs
            if extra:
                outs |= extra
                changed = True
    closed: set[Pair] = set()
    for a, outs in succ.items():
        if a in outs:
            raise CycleError(f"order contains a cycle through {a!r}")
        for b in outs:
            closed.add((a, b))
    return frozenset(closed)


@dataclass(frozen=True)
class Poset:
    """A finite set of opaque element ids with a strict partial order.

    ``order`` is always the full transitive closure.  Use ``from_pairs``
    to build from an arbitrary (unclosed) relation.
    """

    elements: frozenset[str]
    order: frozenset[Pair] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        for a, b in self.order:
            if a == b:
                raise CycleError(f"reflexive pair ({a!r}, {a!r})")
            if (b, a) in self.order:
                raise CycleError(f"mutual pair between {a!r} and {b!r}")
            if a not in self.elements or b not in self.elements:
                raise ValueError(f"order pair ({a!r}, {b!r}) outside elements")
        succ: dict[str, set[str]] = {}
        for a, b in self.order:
            succ.setdefault(a, set()).add(b)
        for a, outs in succ.items():
            for b in outs:
                missing = succ.get(b, set()) - outs
                if missing:
                    raise ValueError(
                        f"order is not transitively closed: {a!r} < {b!r} < {sorted(missing)[0]!r}"
                    )

    @classmethod
    def from_pairs(cls, elements: Iterable[str], pairs: Iterable[Pair] = ()) -> "Poset":
        elems = frozenset(elements)
        closed = close_pairs(pairs)
        for a, b in closed:
            elems |= {a, b}
        return cls(elems, closed)

    # -- queries ---------------------------------------------------------

    def lt(self, a: str, b: str) -> bool:
        return (a, b) in self.order

    def comparable(self, a: str, b: str) -> bool:
        return (a, b) in self.order or (b, a) in self.order

    def predecessors(self, x: str) -> frozenset[str]:
        return frozenset(a for a, b in self.order if b == x)

    def successors(self, x: str) -> frozenset[str]:
        return frozenset(b for a, b in self.order if a == x)

    def covering_relation(self) -> frozenset[Pair]:
        """Transitive reduction: pairs (x, y) with nothing strictly between."""
        cov: set[Pair] = set()
        for a, b in self.order:
            if not any((a, z) in self.order and (z, b) in self.order for z in self.elements):
                cov.add((a, b))
        return frozenset(cov)

    def minimal_elements(self) -> frozenset[str]:
        nonmin = {b for _, b in self.order}
        return self.elements - nonmin

    def maximal_elements(self) -> frozenset[str]:
        nonmax = {a for a, _ in self.order}
        return self.elements - nonmax

    def project(self, keep: Iterable[str]) -> "Poset":
        """Subposet on ``keep``; a restriction of a closed order is closed."""
        kept = self.elements & frozenset(keep)
        return Poset(kept, frozenset((a, b) for a, b in self.order if a in kept and b in kept))

    def linear_extensions(self, limit: int = 10000) -> tuple[list[tuple[str, ...]], bool]:
        """All order-respecting permutations, up to ``limit``.

        Returns (sequences, truncated).  Enumeration is exhaustive when the
        total count fits in the limit, otherwise it stops and flags it.
        """
        preds = {x: set(self.predecessors(x)) for x in self.elements}
        out: list[tuple[str, ...]] = []
        truncated = False

        def extend(prefix: list[str], remaining: set[str]) -> bool:
            nonlocal truncated
            if not remaining:
                if len(out) >= limit:
                    truncated = True
                    return False
                out.append(tuple(prefix))
                return True
            for x in sorted(remaining):
                if preds[x] <= set(prefix):
                    prefix.append(x)
                    remaining.discard(x)
                    ok = extend(prefix, remaining)
                    remaining.add(x)
                    prefix.pop()
                    if not ok:
                        return False
            return True

        extend([], set(self.elements))
        return out, truncated

    # -- set operations (closure applied after the pointwise operation) ---

    def union(self, other: "Poset") -> "Poset":
        return Poset.from_pairs(self.elements | other.elements, self.order | other.order)

    def difference(self, removed: Iterable[str]) -> "Poset":
        """Poset minus a set of elements (order restricted, still closed)."""
        return self.project(self.elements - frozenset(removed))

    def is_subposet(self, other: "Poset") -> bool:
        """True iff self is other restricted to self's elements."""
        if not self.elements <= other.elements:
            return False
        restricted = frozenset(
            (a, b) for a, b in other.order if a in self.elements and b in self.elements
        )
        return self.order == restricted

    def respects(self, sequence: Sequence[str]) -> bool:
        pos = {x: i for i, x in enumerate(sequence)}
        return all(pos[a] < pos[b] for a, b in self.order if a in pos and b in pos)


@dataclass(frozen=True)
class Cut:
    """Partition of a poset into a downward-closed lower set and its upper rest."""

    lower: frozenset[str]
    upper: frozenset[str]

    @classmethod
    def of(cls, p: Poset, lower: Iterable[str]) -> "Cut":
        low = frozenset(lower)
        if not low <= p.elements:
            raise ValueError("lower set contains foreign elements")
        for x in low:
            for y in p.predecessors(x):
                if y not in low:
                    raise ValueError(f"lower set not downward-closed: misses {y!r} below {x!r}")
        return cls(low, p.elements - low)

    def validate_against(self, p: Poset) -> bool:
        if self.lower | self.upper != p.elements or self.lower & self.upper:
            return False
        return not any(u in self.upper and l in self.lower for u, l in p.order)


def transitive_closure(pairs: Iterable[Pair]) -> Poset:
    """Poset over exactly the mentioned elements, order closed."""
    closed = close_pairs(pairs)
    elems = {a for a, _ in closed} | {b for _, b in closed} | {x for p in pairs for x in p}
    return Poset(frozenset(elems), closed)
