"""Request and response bodies for the HTTP service."""
from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

Family = Literal["sql", "logic", "arith"]


class TableBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    header: list[str]
    rows: list[list[str]]
    label_col: int = 0
    id: str = "table"


class HealthResponse(BaseModel):
    status: Literal["ok"] = "ok"
    version: str


class ExecRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    table: TableBody
    program: str
    family: Family


class ExecResponse(BaseModel):
    kind: Literal["scalar", "cells", "bool", "empty"]
    scalar: str | None = None
    cells: list[str] | None = None
    boolean: bool | None = None
    highlighted: list[list[int]] = Field(default_factory=list)


class RealizeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    program: str
    family: Family


class RealizeResponse(BaseModel):
    text: str
    source: str
    fidelity_ok: bool


class RealizerBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    transport: Literal["subprocess", "http"]
    address: str
    timeout_ms: int = 5000
    max_retries: int = 2
    max_inflight: int = 4


class GenerateRequest(BaseModel):
    """The flat config key set; paths resolve on the serving host."""
    model_config = ConfigDict(extra="forbid")
    tables: str
    templates: str
    output: str
    contexts: str | None = None
    tasks: list[str] = Field(default_factory=lambda: ["qa", "fv"])
    branches: list[str] = Field(default_factory=lambda: ["table_only"])
    samples_per_table: int = 10
    seed: int = 0
    label_ratio: float = 0.5
    max_attempts_per_template: int = 20
    realizer: RealizerBody | None = None
    jobs: int = 1


class StatsResponse(BaseModel):
    total: int
    tables: int
    by_task: dict[str, int]
    by_branch: dict[str, int]
    by_family: dict[str, int]
    by_template: dict[str, int]
    by_label: dict[str, int]
    by_answer_type: dict[str, int]
    discards: dict[str, int]
    duplicate_sentence_rate: float
    elapsed_s: float


class CorpusPathRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    path: str


class ViolationBody(BaseModel):
    id: str
    reason: str


class ValidateResponse(BaseModel):
    total: int
    ok: bool
    violations: list[ViolationBody]
