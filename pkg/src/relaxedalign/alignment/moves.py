"""Move and alignment value types."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..objects import ObjectMultiset
from ..pnid import TransitionFiring
from ..poset import Poset

MOVE_KINDS = (
    "sync",
    "log",
    "model",
    "relaxed_sync",
    "relaxed_log",
    "relaxed_model",
    "substitute_sync",
    "correlation_silent",
)

LOG_SIDED = {"sync", "log", "relaxed_sync", "relaxed_log", "substitute_sync"}
MODEL_SIDED = {"sync", "model", "relaxed_sync", "relaxed_model", "substitute_sync", "correlation_silent"}
SYNC_FAMILY = {"sync", "relaxed_sync", "substitute_sync"}
LOG_FAMILY = {"log", "relaxed_log"}
MODEL_FAMILY = {"model", "relaxed_model", "correlation_silent"}
DEVIATING = LOG_FAMILY | {"model", "relaxed_model"}


@dataclass(frozen=True)
class Move:
    """One alignment move.

    ``event`` is the originating log event id (the parent, for fragments)
    and ``objects`` the log-side object multiset actually consumed; they
    are None for model-only moves.  ``fragment_id`` distinguishes the
    pieces of a relaxed event.  ``firing`` is None for log-only moves.
    """

    id: str
    kind: str
    activity: str | None
    event: str | None = None
    fragment_id: str | None = None
    objects: ObjectMultiset | None = None
    firing: TransitionFiring | None = None
    substituted_roles: frozenset[str] = frozenset()
    cost: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if self.kind not in MOVE_KINDS:
            raise ValueError(f"unknown move kind {self.kind!r}")
        if (self.event is not None) != (self.kind in LOG_SIDED):
            raise ValueError(f"{self.kind} move must {'' if self.kind in LOG_SIDED else 'not '}have an event")
        if (self.firing is not None) != (self.kind in MODEL_SIDED):
            raise ValueError(f"{self.kind} move must {'' if self.kind in MODEL_SIDED else 'not '}have a firing")
        if bool(self.substituted_roles) != (self.kind == "substitute_sync"):
            raise ValueError("substituted_roles are exactly for substitute_sync moves")

    def is_deviating(self) -> bool:
        return self.kind in DEVIATING

    def is_relaxed(self) -> bool:
        return self.kind in ("relaxed_sync", "relaxed_log", "relaxed_model", "substitute_sync")


@dataclass(frozen=True)
class Alignment:
    """A poset of moves; ``moves`` are listed in the order the search
    emitted them, which is one linear extension of ``order``."""

    moves: tuple[Move, ...]
    order: Poset
    total_cost: Fraction

    def __post_init__(self) -> None:
        ids = [m.id for m in self.moves]
        if len(set(ids)) != len(ids) or set(ids) != set(self.order.elements):
            raise ValueError("move ids and order elements differ")

    def move_map(self) -> dict[str, Move]:
        return {m.id: m for m in self.moves}

    def by_kind(self, *kinds: str) -> list[Move]:
        return [m for m in self.moves if m.kind in kinds]

    def deviating_moves(self) -> list[Move]:
        return [m for m in self.moves if m.is_deviating()]
