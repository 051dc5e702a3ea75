"""Shared fixtures: the canonical example model, a ready core, and a client."""

from __future__ import annotations

from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from procline.dispatch import ServiceCore
from procline.metamodel import derive_route_table, parse_metamodel
from procline.service import create_app
from procline.store import ModelStore, ingest_model
from procline.tailoring import ProfileStore

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_mm():
    return parse_metamodel((FIXTURES / "fixture-a.mm").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def fixture_routes(fixture_mm):
    return derive_route_table(fixture_mm)


@pytest.fixture(scope="session")
def fixture_snapshot(fixture_mm):
    return ingest_model(
        fixture_mm, (FIXTURES / "fixture-a.xml").read_bytes(), asset_base=FIXTURES
    )


@pytest.fixture
def core(fixture_mm, fixture_routes, fixture_snapshot):
    store = ModelStore()
    store.publish(fixture_snapshot)
    return ServiceCore(
        mm=fixture_mm,
        routes=fixture_routes,
        store=store,
        profiles=ProfileStore(),
        default_variant="base",
    )


@pytest.fixture
def client(core):
    return TestClient(create_app(core))
