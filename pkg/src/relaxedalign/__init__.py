"""Object-centric conformance checking with regular and relaxed alignments.

Aligns partially ordered, object-aware event logs against typed Petri
nets with identifiers, optionally relaxing both sides through projections
so deviations can be pinned to the object roles that disagree.
"""

from .alignment import (
    Alignment,
    CostParams,
    Move,
    align,
    brute_force_align,
    move_cost_relaxed,
    move_cost_standard,
    potential_match,
    relaxed_align,
    verify_alignment,
    verify_alignment_report,
)
from .diagnosis import classify, congruence_of, trust_report
from .logs import Event, SystemLog, build_log, is_relaxed_version, project_log, relax_event
from .objects import ObjectMultiset, ObjectUniverse, Role
from .pnid import (
    ExecutionPoset,
    Marking,
    Mode,
    ProcessModel,
    Tpnid,
    TransitionFiring,
    Variable,
    enabled_modes,
    fire,
    is_execution_poset,
    project_net,
)
from .poset import Cut, Poset, transitive_closure
from .relaxed_model import RelaxedModel, build_relaxed_model, language_inclusion_check
from .testkit import IssueSpec, execution_to_log, generate_run, inject

__version__ = "0.1.0"

__all__ = [
    "Alignment",
    "CostParams",
    "Cut",
    "Event",
    "ExecutionPoset",
    "IssueSpec",
    "Marking",
    "Mode",
    "Move",
    "ObjectMultiset",
    "ObjectUniverse",
    "Poset",
    "ProcessModel",
    "RelaxedModel",
    "Role",
    "SystemLog",
    "Tpnid",
    "TransitionFiring",
    "Variable",
    "align",
    "brute_force_align",
    "build_log",
    "build_relaxed_model",
    "classify",
    "congruence_of",
    "enabled_modes",
    "execution_to_log",
    "fire",
    "generate_run",
    "inject",
    "is_execution_poset",
    "is_relaxed_version",
    "language_inclusion_check",
    "move_cost_relaxed",
    "move_cost_standard",
    "potential_match",
    "project_log",
    "project_net",
    "relax_event",
    "relaxed_align",
    "transitive_closure",
    "trust_report",
    "verify_alignment",
    "verify_alignment_report",
]
