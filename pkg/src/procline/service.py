"""HTTP service: a thin FastAPI shell around the dispatch core.

All model/OpenAPI/export/asset traffic flows through dispatch() so responses
are identical to what the CLI produces offline. Only the profile endpoints
carry JSON request bodies and are therefore modeled as explicit routes.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .config import ServiceConfig, build_core, load_config
from .dispatch import ServiceCore, dispatch
from .errors import ProclineError
from .store import LATEST
from .tailoring import validate_profile


class ProfileIn(BaseModel):
    name: str
    selections: dict[str, str] = Field(default_factory=dict)
    variant: str | None = None


class ProfileOut(BaseModel):
    id: str
    name: str
    variant: str
    selections: dict[str, str]


class VariantOut(BaseModel):
    variant: str
    versions: list[str]


def create_app(core: ServiceCore) -> FastAPI:
    app = FastAPI(openapi_url=None, docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.core = core

    @app.exception_handler(ProclineError)
    async def on_procline_error(request: Request, exc: ProclineError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.status, content={"code": exc.code, "message": exc.message}
        )

    @app.post("/profiles", response_model=ProfileOut, status_code=201)
    async def save_profile(body: ProfileIn) -> ProfileOut:
        variant = body.variant or core.default_variant
        snapshot = core.store.get_snapshot(variant, LATEST)
        profile = validate_profile(snapshot, body.selections)
        stored = core.profiles.save(body.name, variant, profile)
        return ProfileOut(
            id=stored.id,
            name=stored.name,
            variant=stored.variant,
            selections=dict(stored.profile.selections),
        )

    @app.get("/profiles", response_model=list[ProfileOut])
    async def list_profiles() -> list[ProfileOut]:
        return [
            ProfileOut(
                id=p.id, name=p.name, variant=p.variant, selections=dict(p.profile.selections)
            )
            for p in core.profiles.list()
        ]

    @app.get("/profiles/{profile_id}", response_model=ProfileOut)
    async def get_profile(profile_id: str) -> ProfileOut:
        stored = core.profiles.get(profile_id)
        return ProfileOut(
            id=stored.id,
            name=stored.name,
            variant=stored.variant,
            selections=dict(stored.profile.selections),
        )

    @app.get("/{full_path:path}")
    async def serve_path(full_path: str, request: Request) -> Response:
        result = dispatch(core, "GET", full_path, dict(request.query_params))
        headers = {}
        if result.status == 200 and full_path.strip("/").startswith("export/"):
            kind = full_path.strip("/").split("/")[1]
            headers["Content-Disposition"] = f'attachment; filename="{kind}.zip"'
        return Response(
            content=result.body,
            status_code=result.status,
            media_type=result.media_type,
            headers=headers,
        )

    return app


def create_app_from_config(config_path: Path | str) -> FastAPI:
    return create_app(build_core(load_config(config_path)))


def serve(config: ServiceConfig) -> None:
    """Build the core and run the blocking HTTP server."""
    import uvicorn

    app = create_app(build_core(config))
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
