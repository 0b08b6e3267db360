"""Moves, costs, matching, search, verification, and the brute-force oracle."""

from .brute import brute_force_align
from .costs import CostParams, move_cost_relaxed, move_cost_standard
from .moves import Alignment, Move, MOVE_KINDS
from .matching import potential_match
from .search import align, relaxed_align
from .verify import fragment_log_view, verify_alignment, verify_alignment_report

__all__ = [
    "Alignment",
    "CostParams",
    "Move",
    "MOVE_KINDS",
    "align",
    "brute_force_align",
    "fragment_log_view",
    "move_cost_relaxed",
    "move_cost_standard",
    "potential_match",
    "relaxed_align",
    "verify_alignment",
    "verify_alignment_report",
]
