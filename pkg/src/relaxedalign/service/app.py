"""FastAPI application exposing the alignment engine."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..errors import (
    BudgetExceeded,
    DocumentError,
    NoAlignment,
    NoRunFound,
    RelaxedAlignError,
    TargetNotFound,
)
from . import handlers
from .schemas import (
    AlignRequest,
    AlignResponse,
    CheckRequest,
    CheckResponse,
    DocumentResponse,
    ExportDotRequest,
    ExportDotResponse,
    GenerateRequest,
    HealthResponse,
    InjectRequest,
    ModelRequest,
    ModelResponse,
    ProjectRequest,
)

app = FastAPI(
    title="relaxedalign",
    version=__version__,
    description=(
        "Cost-optimal regular and relaxed alignments between object-centric "
        "partially ordered event logs and typed Petri nets with identifiers."
    ),
)


def _wrap(call):
    try:
        return call()
    except DocumentError as exc:
        raise HTTPException(status_code=422, detail={"code": "document", "message": str(exc)})
    except NoAlignment as exc:
        raise HTTPException(status_code=409, detail={"code": "no_alignment", "message": str(exc)})
    except BudgetExceeded as exc:
        raise HTTPException(status_code=400, detail={"code": "budget_exceeded", "message": str(exc)})
    except (NoRunFound, TargetNotFound) as exc:
        raise HTTPException(status_code=409, detail={"code": "not_found", "message": str(exc)})
    except RelaxedAlignError as exc:
        raise HTTPException(status_code=422, detail={"code": "invalid", "message": str(exc)})


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/align", response_model=AlignResponse)
def align_endpoint(request: AlignRequest) -> AlignResponse:
    result = _wrap(lambda: handlers.run_align(request))
    return AlignResponse(**result)


@app.post("/relax-model", response_model=ModelResponse)
def relax_model_endpoint(request: ModelRequest) -> ModelResponse:
    return ModelResponse(model=_wrap(lambda: handlers.run_relax_model(request.model)))


@app.post("/project", response_model=DocumentResponse)
def project_endpoint(request: ProjectRequest) -> DocumentResponse:
    return DocumentResponse(document=_wrap(lambda: handlers.run_project(request)))


@app.post("/check", response_model=CheckResponse)
def check_endpoint(request: CheckRequest) -> CheckResponse:
    ok, violations = _wrap(lambda: handlers.run_check(request))
    return CheckResponse(ok=ok, violations=violations)


@app.post("/generate", response_model=DocumentResponse)
def generate_endpoint(request: GenerateRequest) -> DocumentResponse:
    return DocumentResponse(document=_wrap(lambda: handlers.run_generate(request)))


@app.post("/inject", response_model=DocumentResponse)
def inject_endpoint(request: InjectRequest) -> DocumentResponse:
    return DocumentResponse(document=_wrap(lambda: handlers.run_inject(request)))


@app.post("/export-dot", response_model=ExportDotResponse)
def export_dot_endpoint(request: ExportDotRequest) -> ExportDotResponse:
    return ExportDotResponse(dot=_wrap(lambda: handlers.run_export_dot(request)))
