"""HTTP service exposing the synthesis toolchain.

The CLI talks to this app in-process by default; `tabsynth serve` puts it
behind uvicorn.  Endpoints taking file paths (generate, validate, stats)
resolve them on the host the app runs on.
"""
from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import TabsynthError
from ..execution import exec_program
from ..programs.parse import parse_program
from ..realize.rules import realize_rule
from ..tables import Table
from ..pipeline import (config_from_obj, generate, stats_corpus,
                        validate_corpus)
from .schemas import (CorpusPathRequest, ExecRequest, ExecResponse,
                      GenerateRequest, HealthResponse, RealizeRequest,
                      RealizeResponse, StatsResponse, ValidateResponse,
                      ViolationBody)


def create_app() -> FastAPI:
    app = FastAPI(
        title="tabsynth",
        version=__version__,
        description="Synthesizes tabular-reasoning questions and claims by "
                    "sampling typed program templates against tables.",
    )

    @app.exception_handler(TabsynthError)
    async def _domain_error(request: Request, exc: TabsynthError):
        return JSONResponse(
            status_code=400,
            content={"detail": f"{type(exc).__name__}: {exc}"},
        )

    @app.exception_handler(OSError)
    async def _io_error(request: Request, exc: OSError):
        return JSONResponse(
            status_code=400,
            content={"detail": f"io error: {exc}"},
        )

    @app.get("/v1/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(version=__version__)

    @app.post("/v1/exec", response_model=ExecResponse,
              response_model_exclude_none=True)
    def exec_once(req: ExecRequest) -> ExecResponse:
        table = Table.from_strings(req.table.id, req.table.header,
                                   req.table.rows, req.table.label_col)
        program = parse_program(req.program, req.family)
        result = exec_program(program, table)
        return ExecResponse(
            kind=result.kind,
            scalar=result.scalar.surface() if result.scalar is not None else None,
            cells=([v.surface() for v in result.cells]
                   if result.cells is not None else None),
            boolean=result.boolean,
            highlighted=sorted([c.row, c.col] for c in result.highlighted),
        )

    @app.post("/v1/realize", response_model=RealizeResponse)
    def realize(req: RealizeRequest) -> RealizeResponse:
        program = parse_program(req.program, req.family)
        realization = realize_rule(program)
        return RealizeResponse(text=realization.text,
                               source=realization.source,
                               fidelity_ok=realization.fidelity_ok)

    @app.post("/v1/generate", response_model=StatsResponse)
    def generate_corpus(req: GenerateRequest) -> StatsResponse:
        cfg = config_from_obj(req.model_dump(exclude_none=True), Path.cwd())
        stats = generate(cfg)
        return StatsResponse(**stats.to_json_obj())

    @app.post("/v1/validate", response_model=ValidateResponse)
    def validate(req: CorpusPathRequest) -> ValidateResponse:
        report = validate_corpus(req.path)
        return ValidateResponse(
            total=report.total,
            ok=report.ok,
            violations=[ViolationBody(id=v.sample_id, reason=v.reason)
                        for v in report.violations],
        )

    @app.post("/v1/stats", response_model=StatsResponse)
    def stats(req: CorpusPathRequest) -> StatsResponse:
        return StatsResponse(**stats_corpus(req.path).to_json_obj())

    return app
