"""Move cost functions, exact rationals throughout.

The standard scheme charges one unit per deviating move.  The relaxed
scheme charges deviating moves by involved-object count plus a relaxation
term, synchronous moves by the relaxation term alone, and correlation
bind/unbind by epsilon squared.  Silent model moves always cost epsilon
squared so tau cycles are never free.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .moves import LOG_FAMILY, Move, SYNC_FAMILY

Rational = Union[Fraction, int, str]

STANDARD = "standard"
RELAXED = "relaxed"


def _frac(value: Rational) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True)
class CostParams:
    epsilon: Fraction = Fraction(1, 1024)
    scheme: str = STANDARD
    log_weight: Fraction = Fraction(1)
    model_weight: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "epsilon", _frac(self.epsilon))
        object.__setattr__(self, "log_weight", _frac(self.log_weight))
        object.__setattr__(self, "model_weight", _frac(self.model_weight))
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must be in (0, 1)")
        if self.log_weight <= 0 or self.model_weight <= 0:
            raise ValueError("move weights must be positive")

    @classmethod
    def standard(cls, **kw) -> "CostParams":
        return cls(scheme=STANDARD, **kw)

    @classmethod
    def relaxed(cls, **kw) -> "CostParams":
        return cls(scheme=RELAXED, **kw)


def move_cost_standard(move: Move, params: CostParams | None = None) -> Fraction:
    """Unit costs: deviating non-silent moves cost one (weighted), silent
    model moves cost epsilon squared, synchronous moves are free."""
    params = params or CostParams()
    eps = params.epsilon
    if move.kind in SYNC_FAMILY:
        return Fraction(0)
    if move.kind in LOG_FAMILY:
        return params.log_weight
    # model-sided: silent transitions must stay positive
    if move.activity is None:
        return eps * eps
    return params.model_weight


def move_cost_relaxed(
    move: Move,
    params: CostParams | None = None,
    var_count: int | None = None,
    *,
    substituted_slots: int = 0,
) -> Fraction:
    """Projection-aware costs.

    ``var_count`` is the variable count of the move's base transition;
    for log-only moves it is the fragment's own object count.  Deviating
    moves on visible labels cost ``|O| + (var_count - |O|) * eps``,
    synchronous moves ``(var_count - |O|) * eps``, correlation bind/unbind
    and silent model moves ``eps**2``.  Substitute synchronous moves add
    one unit per substituted object slot.
    """
    params = params or CostParams()
    eps = params.epsilon
    if move.kind == "correlation_silent":
        return eps * eps
    if move.objects is not None:
        size = len(move.objects)
    else:
        size = len(move.firing.mode.binding)
    if var_count is None:
        var_count = size
    slack = max(var_count - size, 0)
    if move.kind in SYNC_FAMILY:
        base = Fraction(substituted_slots) if move.kind == "substitute_sync" else Fraction(0)
        return base + slack * eps
    if move.activity is None:
        return eps * eps
    weight = params.log_weight if move.kind in LOG_FAMILY else params.model_weight
    return Fraction(size) * weight + slack * eps


def move_cost(move: Move, params: CostParams, var_count: int | None = None, **kw) -> Fraction:
    if params.scheme == RELAXED:
        return move_cost_relaxed(move, params, var_count, **kw)
    return move_cost_standard(move, params)
