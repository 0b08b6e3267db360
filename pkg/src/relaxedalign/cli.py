"""Command-line client for the alignment service.

Each subcommand builds the same request the HTTP endpoint takes and, by
default, runs it in process; ``--server URL`` sends it to a running
service instead.  Documents go to stdout, diagnostics to stderr.

Exit codes: 0 success, 1 parse/usage errors, 2 no alignment exists,
3 state budget exceeded.
"""

from __future__ import annotations

import json
import sys
from typing import Any

import click

from .errors import (
    BudgetExceeded,
    DocumentError,
    NoAlignment,
    NoRunFound,
    RelaxedAlignError,
    TargetNotFound,
)
from .service import handlers
from .service.schemas import (
    AlignOptions,
    AlignRequest,
    CheckRequest,
    ExportDotRequest,
    GenerateRequest,
    InjectRequest,
    ProjectRequest,
)

EXIT_PARSE = 1
EXIT_NO_ALIGNMENT = 2
EXIT_BUDGET = 3


def _load(path: str) -> dict[str, Any]:
    try:
        with open(path) as handle:
            return json.load(handle)
    except FileNotFoundError:
        raise click.ClickException(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        click.echo(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}", err=True)
        sys.exit(EXIT_PARSE)


def _emit(document: Any) -> None:
    click.echo(json.dumps(document, indent=2, sort_keys=True))


def _post(server: str, endpoint: str, payload: dict[str, Any]) -> dict[str, Any]:
    import httpx

    response = httpx.post(f"{server.rstrip('/')}/{endpoint}", json=payload, timeout=600.0)
    if response.status_code >= 400:
        detail = response.json().get("detail", {})
        code = detail.get("code") if isinstance(detail, dict) else None
        click.echo(f"service error: {detail}", err=True)
        if code == "no_alignment":
            sys.exit(EXIT_NO_ALIGNMENT)
        if code == "budget_exceeded":
            sys.exit(EXIT_BUDGET)
        sys.exit(EXIT_PARSE)
    return response.json()


def _run(ctx: click.Context, endpoint: str, request, local) -> dict[str, Any]:
    server = ctx.obj.get("server")
    if server:
        return _post(server, endpoint, request.model_dump())
    try:
        return local()
    except DocumentError as exc:
        click.echo(f"document error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    except NoAlignment as exc:
        click.echo(f"no alignment: {exc}", err=True)
        sys.exit(EXIT_NO_ALIGNMENT)
    except BudgetExceeded as exc:
        click.echo(f"budget exceeded: {exc}", err=True)
        sys.exit(EXIT_BUDGET)
    except (NoRunFound, TargetNotFound, RelaxedAlignError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)


@click.group()
@click.option("--server", default=None, help="Base URL of a running service; default is in-process.")
@click.pass_context
def main(ctx: click.Context, server: str | None) -> None:
    """Align object-centric event logs with typed Petri nets."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server


@main.command()
@click.argument("model_path")
@click.argument("log_path")
@click.option("--relaxed", is_flag=True, help="Compute a relaxed alignment.")
@click.option("--epsilon", default="1/1024", show_default=True)
@click.option("--substitutable-roles", default="", help="Comma-separated roles allowed to substitute.")
@click.option("--log-weight", default="1", show_default=True)
@click.option("--model-weight", default="1", show_default=True)
@click.option("--max-states", type=int, default=None, help="State budget (overrides RA_MAX_STATES).")
@click.option("--strict-final", is_flag=True, help="Require the exact final marking for idle objects too.")
@click.pass_context
def align(
    ctx: click.Context,
    model_path: str,
    log_path: str,
    relaxed: bool,
    epsilon: str,
    substitutable_roles: str,
    log_weight: str,
    model_weight: str,
    max_states: int | None,
    strict_final: bool,
) -> None:
    """Cost-optimal alignment of LOG_PATH against MODEL_PATH."""
    request = AlignRequest(
        model=_load(model_path),
        log=_load(log_path),
        options=AlignOptions(
            relaxed=relaxed,
            epsilon=epsilon,
            substitutable_roles=[r for r in substitutable_roles.split(",") if r],
            log_weight=log_weight,
            model_weight=model_weight,
            max_states=max_states,
            strict_final=strict_final,
        ),
    )
    _emit(_run(ctx, "align", request, lambda: handlers.run_align(request)))


@main.command("relax-model")
@click.argument("model_path")
@click.pass_context
def relax_model(ctx: click.Context, model_path: str) -> None:
    """Emit the relaxed model: projections plus correlation bind/unbind."""
    doc = _load(model_path)
    from .service.schemas import ModelRequest

    request = ModelRequest(model=doc)
    if ctx.obj.get("server"):
        _emit(_post(ctx.obj["server"], "relax-model", request.model_dump())["model"])
    else:
        _emit(_run(ctx, "relax-model", request, lambda: handlers.run_relax_model(doc)))


@main.command()
@click.argument("document_path")
@click.option("--roles", default="", help="Comma-separated roles to keep.")
@click.option("--objects", default="", help="Comma-separated object names to keep.")
@click.pass_context
def project(ctx: click.Context, document_path: str, roles: str, objects: str) -> None:
    """Project a model or log document onto roles or objects."""
    request = ProjectRequest(
        document=_load(document_path),
        roles=[r for r in roles.split(",") if r],
        objects=[o for o in objects.split(",") if o],
    )
    if ctx.obj.get("server"):
        _emit(_post(ctx.obj["server"], "project", request.model_dump())["document"])
    else:
        _emit(_run(ctx, "project", request, lambda: handlers.run_project(request)))


@main.command()
@click.argument("model_path")
@click.argument("log_path")
@click.argument("alignment_path")
@click.option("--relaxed", is_flag=True)
@click.option("--strict-final", is_flag=True)
@click.pass_context
def check(
    ctx: click.Context,
    model_path: str,
    log_path: str,
    alignment_path: str,
    relaxed: bool,
    strict_final: bool,
) -> None:
    """Independently verify an alignment document."""
    request = CheckRequest(
        model=_load(model_path),
        log=_load(log_path),
        alignment=_load(alignment_path),
        relaxed=relaxed,
        strict_final=strict_final,
    )
    if ctx.obj.get("server"):
        result = _post(ctx.obj["server"], "check", request.model_dump())
        ok, violations = result["ok"], result["violations"]
    else:
        ok, violations = _run(ctx, "check", request, lambda: handlers.run_check(request))
    _emit({"ok": ok, "violations": violations})
    if not ok:
        sys.exit(EXIT_PARSE)


@main.command()
@click.argument("model_path")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-firings", type=int, default=40, show_default=True)
@click.option("--min-firings", type=int, default=0, show_default=True)
@click.option("--recorder", multiple=True, help="activity=recorder tag, repeatable.")
@click.pass_context
def generate(
    ctx: click.Context,
    model_path: str,
    seed: int,
    max_firings: int,
    min_firings: int,
    recorder: tuple[str, ...],
) -> None:
    """Generate a log from a random run of the model."""
    recorders = {}
    for entry in recorder:
        activity, _, tag = entry.partition("=")
        recorders[activity] = tag
    request = GenerateRequest(
        model=_load(model_path),
        seed=seed,
        max_firings=max_firings,
        min_firings=min_firings,
        recorders=recorders,
    )
    if ctx.obj.get("server"):
        _emit(_post(ctx.obj["server"], "generate", request.model_dump())["document"])
    else:
        _emit(_run(ctx, "generate", request, lambda: handlers.run_generate(request)))


@main.command()
@click.argument("log_path")
@click.argument("kind", type=click.Choice(["mi_e", "in_e", "mi_o", "in_o", "mi_p", "in_p"]))
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--event-id", default=None)
@click.option("--activity", default=None)
@click.option("--role", default=None)
@click.option("--object-name", default=None)
@click.option("--replacement", default=None)
@click.pass_context
def inject(
    ctx: click.Context,
    log_path: str,
    kind: str,
    seed: int,
    event_id: str | None,
    activity: str | None,
    role: str | None,
    object_name: str | None,
    replacement: str | None,
) -> None:
    """Inject one quality issue into a log."""
    request = InjectRequest(
        log=_load(log_path),
        kind=kind,
        seed=seed,
        event_id=event_id,
        activity=activity,
        role=role,
        object_name=object_name,
        replacement=replacement,
    )
    if ctx.obj.get("server"):
        _emit(_post(ctx.obj["server"], "inject", request.model_dump())["document"])
    else:
        _emit(_run(ctx, "inject", request, lambda: handlers.run_inject(request)))


@main.command("export-dot")
@click.argument("document_path")
@click.option("--color-by", type=click.Choice(["kind", "role"]), default="kind", show_default=True)
@click.pass_context
def export_dot_cmd(ctx: click.Context, document_path: str, color_by: str) -> None:
    """Render an alignment or log document as Graphviz DOT."""
    request = ExportDotRequest(document=_load(document_path), color_by=color_by)
    if ctx.obj.get("server"):
        click.echo(_post(ctx.obj["server"], "export-dot", request.model_dump())["dot"])
    else:
        click.echo(_run(ctx, "export-dot", request, lambda: handlers.run_export_dot(request)))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
