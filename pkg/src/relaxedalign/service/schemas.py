"""Pydantic request/response models for the alignment service.

Document payloads (models, logs, alignments) stay schemaless dicts
validated by the document layer; the wrapper models carry them plus the
engine options.
"""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class AlignOptions(BaseModel):
    relaxed: bool = False
    epsilon: str = "1/1024"
    substitutable_roles: list[str] = Field(default_factory=list)
    log_weight: str = "1"
    model_weight: str = "1"
    max_states: Optional[int] = None
    strict_final: bool = False


class AlignRequest(BaseModel):
    model: dict[str, Any]
    log: dict[str, Any]
    options: AlignOptions = Field(default_factory=AlignOptions)


class AlignResponse(BaseModel):
    alignment: dict[str, Any]
    diagnosis: dict[str, Any]


class ModelRequest(BaseModel):
    model: dict[str, Any]


class ModelResponse(BaseModel):
    model: dict[str, Any]


class ProjectRequest(BaseModel):
    document: dict[str, Any]
    roles: list[str] = Field(default_factory=list)
    objects: list[str] = Field(default_factory=list)


class DocumentResponse(BaseModel):
    document: dict[str, Any]


class CheckRequest(BaseModel):
    model: dict[str, Any]
    log: dict[str, Any]
    alignment: dict[str, Any]
    relaxed: bool = False
    strict_final: bool = False


class CheckResponse(BaseModel):
    ok: bool
    violations: list[str]


class GenerateRequest(BaseModel):
    model: dict[str, Any]
    seed: int = 0
    max_firings: int = 40
    min_firings: int = 0
    recorders: dict[str, str] = Field(default_factory=dict)


class InjectRequest(BaseModel):
    log: dict[str, Any]
    kind: str
    seed: int = 0
    event_id: Optional[str] = None
    activity: Optional[str] = None
    role: Optional[str] = None
    object_name: Optional[str] = None
    replacement: Optional[str] = None


class ExportDotRequest(BaseModel):
    document: dict[str, Any]
    color_by: str = "kind"


class ExportDotResponse(BaseModel):
    dot: str


class HealthResponse(BaseModel):
    status: str
    version: str
