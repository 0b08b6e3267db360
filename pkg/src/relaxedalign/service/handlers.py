"""Service-layer operations shared by the HTTP endpoints and the CLI."""

from __future__ import annotations

from typing import Any

from ..alignment import align, relaxed_align, verify_alignment_report
from ..alignment.costs import CostParams
from ..diagnosis import classify, trust_report
from ..documents import (
    alignment_from_doc,
    alignment_to_doc,
    diagnosis_to_doc,
    log_from_doc,
    log_to_doc,
    model_from_doc,
    model_to_doc,
    parse_fraction,
    relaxed_model_to_doc,
)
from ..dot import export_dot
from ..logs import project_log
from ..objects import ObjectMultiset
from ..pnid import project_net
from ..relaxed_model import build_relaxed_model
from ..testkit import IssueSpec, execution_to_log, generate_run, inject
from .schemas import (
    AlignOptions,
    AlignRequest,
    CheckRequest,
    ExportDotRequest,
    GenerateRequest,
    InjectRequest,
    ProjectRequest,
)


def run_align(request: AlignRequest) -> dict[str, Any]:
    model = model_from_doc(request.model)
    log = log_from_doc(request.log)
    opts = request.options
    params_kw = dict(
        epsilon=parse_fraction(opts.epsilon),
        log_weight=parse_fraction(opts.log_weight),
        model_weight=parse_fraction(opts.model_weight),
    )
    if opts.relaxed:
        alignment = relaxed_align(
            log,
            model,
            CostParams.relaxed(**params_kw),
            substitutable_roles=opts.substitutable_roles,
            strict_final=opts.strict_final,
            max_states=opts.max_states,
        )
    else:
        alignment = align(
            log,
            model,
            CostParams.standard(**params_kw),
            strict_final=opts.strict_final,
            max_states=opts.max_states,
        )
    records = classify(alignment, log, model)
    trust = trust_report(alignment, log, model)
    return {
        "alignment": alignment_to_doc(alignment),
        "diagnosis": diagnosis_to_doc(records, trust),
    }


def run_relax_model(model_doc: dict[str, Any]) -> dict[str, Any]:
    model = model_from_doc(model_doc)
    return relaxed_model_to_doc(build_relaxed_model(model))


def run_project(request: ProjectRequest) -> dict[str, Any]:
    doc = request.document
    if "transitions" in doc:
        model = model_from_doc(doc)
        roles = request.roles or sorted(model.universe.role_names())
        objs = (
            ObjectMultiset.from_counts(
                {
                    name: count
                    for name, count in model.universe.objects.entries
                    if request.objects and name in request.objects
                }
            )
            if request.objects
            else model.universe.objects_of_roles(roles)
        )
        return model_to_doc(project_net(model, objs))
    log = log_from_doc(doc)
    if request.objects:
        objs = log.universe.objects.restrict(request.objects)
    else:
        roles = request.roles or sorted(log.universe.role_names())
        objs = log.universe.objects_of_roles(roles)
    return log_to_doc(project_log(log, objs))


def run_check(request: CheckRequest) -> tuple[bool, list[str]]:
    model = model_from_doc(request.model)
    log = log_from_doc(request.log)
    alignment = alignment_from_doc(request.alignment)
    report = verify_alignment_report(
        alignment, log, model, relaxed=request.relaxed, strict_final=request.strict_final
    )
    return report.ok, list(report.violations)


def run_generate(request: GenerateRequest) -> dict[str, Any]:
    model = model_from_doc(request.model)
    run = generate_run(
        model, request.seed, request.max_firings, min_firings=request.min_firings
    )
    log = execution_to_log(model, run, recorder_by_activity=request.recorders or None)
    return log_to_doc(log)


def run_inject(request: InjectRequest) -> dict[str, Any]:
    log = log_from_doc(request.log)
    spec = IssueSpec(
        kind=request.kind,
        event_id=request.event_id,
        activity=request.activity,
        role=request.role,
        object_name=request.object_name,
        replacement=request.replacement,
    )
    return log_to_doc(inject(log, spec, request.seed))


def run_export_dot(request: ExportDotRequest) -> str:
    return export_dot(request.document, color_by=request.color_by)
