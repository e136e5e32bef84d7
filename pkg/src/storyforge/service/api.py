"""HTTP JSON API consumed by the authoring front-end.

Endpoints:
    POST /sessions                  -> new authoring session
    POST /sessions/{id}/phases      -> submit the current phase
    POST /jobs                      -> launch generation (session or brief)
    GET  /jobs/{id}                 -> job snapshot with progress
    GET  /artifacts/{id}            -> stored bytes (manifest or media)
    GET  /catalog                   -> the 31 narrative-function cards
"""

from __future__ import annotations

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from ..errors import (
    BriefValidationError,
    IntegrityError,
    InvalidRequestError,
    NotFoundError,
    SessionOrderError,
)
from ..narrative import brief_from_dict, validate_brief
from .core import MEDIA_TYPES, StoryService


def create_app(service: StoryService) -> FastAPI:
    app = FastAPI(title="storyforge", version="0.1.0")
    app.state.service = service

    @app.exception_handler(BriefValidationError)
    async def _validation_error(_req: Request, exc: BriefValidationError):
        return JSONResponse(
            status_code=422,
            content={
                "errors": [
                    {
                        "message": issue.message,
                        "phase": issue.phase_ordinal,
                        "function_id": issue.function_id,
                    }
                    for issue in exc.issues
                ]
            },
        )

    @app.exception_handler(SessionOrderError)
    async def _order_error(_req: Request, exc: SessionOrderError):
        return JSONResponse(status_code=409, content={"error": str(exc)})

    @app.exception_handler(NotFoundError)
    async def _not_found(_req: Request, exc: NotFoundError):
        return JSONResponse(status_code=404, content={"error": str(exc)})

    @app.exception_handler(IntegrityError)
    async def _corrupt(_req: Request, exc: IntegrityError):
        return JSONResponse(status_code=500, content={"error": str(exc)})

    @app.exception_handler(InvalidRequestError)
    async def _invalid(_req: Request, exc: InvalidRequestError):
        return JSONResponse(status_code=422, content={"error": str(exc)})

    @app.get("/catalog")
    def get_catalog():
        return {"functions": service.catalog_dicts()}

    @app.post("/sessions", status_code=201)
    def create_session():
        return service.sessions.create()

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return service.sessions.get(session_id)

    @app.post("/sessions/{session_id}/phases")
    async def submit_phase(session_id: str, request: Request):
        payload = await request.json()
        return service.sessions.submit_phase(session_id, payload)

    @app.post("/jobs", status_code=202)
    async def create_job(request: Request):
        payload = await request.json()
        overrides = payload.get("overrides") or {}
        if "session_id" in payload:
            style = overrides.get("animation_style", "animated")
            brief = service.sessions.brief(payload["session_id"], animation_style=style)
            overrides = {k: v for k, v in overrides.items() if k != "animation_style"}
        elif "brief" in payload:
            brief = brief_from_dict(payload["brief"])
        else:
            raise InvalidRequestError("request must carry session_id or brief")
        validate_brief(brief, service.functions)
        return service.jobs.submit(brief, overrides)

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        return service.jobs.status(job_id)

    @app.get("/artifacts/{artifact_id}")
    def get_artifact(artifact_id: str):
        data, fmt = service.fetch_artifact(artifact_id)
        return Response(content=data, media_type=MEDIA_TYPES.get(fmt, MEDIA_TYPES["bin"]))

    return app


def create_default_app() -> FastAPI:
    """App factory for `uvicorn storyforge.service.api:create_default_app`."""
    return create_app(StoryService())
