"""Framework-free request dispatch over the derived route surface.

ServiceCore bundles everything a running service needs; dispatch() maps one
GET request (path + query map) onto the projection engine and returns status,
media type, and body bytes. The HTTP layer and the CLI both delegate here, so
their outputs stay in lockstep.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ProclineError, UnknownRouteError
from .exports import build_archive, generate_export
from .metamodel import Metamodel, RouteTable
from .openapi import generate_openapi, openapi_json, openapi_yaml
from .projection import (
    project_collection,
    project_element,
    render_xml,
    resolve_association,
)
from .store import LATEST, ModelStore, get_binary
from .tailoring import ProfileStore, validate_profile

XML_MEDIA = "application/xml; charset=utf-8"
JSON_MEDIA = "application/json"
ZIP_MEDIA = "application/zip"

# query keys with routing meaning on non-model paths
RESERVED_QUERY = ("variant", "version")


@dataclass
class ServiceCore:
    mm: Metamodel
    routes: RouteTable
    store: ModelStore
    profiles: ProfileStore
    default_variant: str


@dataclass
class DispatchResult:
    status: int
    media_type: str
    body: bytes


def _json_result(status: int, payload: object) -> DispatchResult:
    body = (json.dumps(payload, indent=2) + "\n").encode("utf-8")
    return DispatchResult(status=status, media_type=JSON_MEDIA, body=body)


def _error_result(exc: ProclineError) -> DispatchResult:
    return _json_result(exc.status, {"code": exc.code, "message": exc.message})


def _split_model_path(core: ServiceCore, segments: list[str]) -> tuple[str, str, list[str]]:
    """Separate the optional variant/version prefix from the route segments."""
    if len(segments) >= 3 and segments[0] in core.store.variant_names():
        return segments[0], segments[1], list(segments[2:])
    return core.default_variant, LATEST, list(segments)


def _model_request(core: ServiceCore, segments: list[str], query: dict[str, str]) -> DispatchResult:
    variant, version, route_segments = _split_model_path(core, segments)
    snapshot = core.store.get_snapshot(variant, version)
    profile = validate_profile(snapshot, query)

    if len(route_segments) == 1:
        route = core.routes.collection(route_segments[0])
        if route is None:
            raise UnknownRouteError(f"no collection route for {route_segments[0]!r}")
        doc = project_collection(snapshot, core.mm, route.source_type, profile)
    elif len(route_segments) == 2:
        route = core.routes.by_id(route_segments[0])
        if route is None:
            raise UnknownRouteError(f"no by-id route for {route_segments[0]!r}")
        doc = project_element(snapshot, core.mm, route.source_type, route_segments[1], profile)
    elif len(route_segments) == 3:
        route = core.routes.nested(route_segments[0], route_segments[2])
        if route is None:
            raise UnknownRouteError(
                f"no association route {route_segments[2]!r} under {route_segments[0]!r}"
            )
        doc = resolve_association(
            snapshot,
            core.mm,
            route.source_type,
            route_segments[1],
            route_segments[2],
            profile,
        )
    else:
        raise UnknownRouteError("model paths have at most three route segments")
    return DispatchResult(status=200, media_type=XML_MEDIA, body=render_xml(doc))


def _pick_snapshot(core: ServiceCore, query: dict[str, str]):
    variant = query.pop("variant", core.default_variant)
    version = query.pop("version", LATEST)
    return core.store.get_snapshot(variant, version)


def _asset_request(core: ServiceCore, asset_id: str, query: dict[str, str]) -> DispatchResult:
    snapshot = _pick_snapshot(core, query)
    payload, media_type = get_binary(snapshot, asset_id)
    return DispatchResult(status=200, media_type=media_type, body=payload)


def _export_request(core: ServiceCore, kind: str, query: dict[str, str]) -> DispatchResult:
    snapshot = _pick_snapshot(core, query)
    profile = validate_profile(snapshot, query)
    bundle = generate_export(kind, snapshot, core.mm, profile)
    return DispatchResult(status=200, media_type=ZIP_MEDIA, body=build_archive(bundle))


def _openapi_document(core: ServiceCore) -> dict:
    try:
        snapshot = core.store.get_snapshot(core.default_variant, LATEST)
        characteristics = snapshot.characteristics
    except ProclineError:
        characteristics = ()
    return generate_openapi(core.mm, core.routes, characteristics)


def dispatch(core: ServiceCore, method: str, path: str, query: dict[str, str]) -> DispatchResult:
    """Evaluate one request; never raises for request-level faults."""
    query = dict(query)
    try:
        segments = [s for s in path.strip("/").split("/") if s]
        if method.upper() != "GET" or not segments:
            raise UnknownRouteError(f"no route for {method} /{path.strip('/')}")
        head, rest = segments[0], segments[1:]
        if head == "api" and rest:
            return _model_request(core, rest, query)
        if head == "assets" and len(rest) == 1:
            return _asset_request(core, rest[0], query)
        if head == "export" and len(rest) == 1:
            return _export_request(core, rest[0], query)
        if head == "variants" and not rest:
            return _json_result(200, core.store.list_variants())
        if head == "openapi.yaml" and not rest:
            return DispatchResult(200, "application/yaml", openapi_yaml(_openapi_document(core)))
        if head == "openapi.json" and not rest:
            return DispatchResult(200, JSON_MEDIA, openapi_json(_openapi_document(core)))
        if head == "healthz" and not rest:
            return DispatchResult(200, "text/plain; charset=utf-8", b"ok\n")
        raise UnknownRouteError(f"no route for GET /{'/'.join(segments)}")
    except ProclineError as exc:
        return _error_result(exc)
