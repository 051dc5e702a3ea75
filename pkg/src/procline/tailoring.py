"""Live tailoring: project profiles and applicability filtering.

A profile assigns at most one value per project characteristic. An element is
applicable when every characteristic its condition mentions is either absent
from the profile or assigned one of the accepted values; unconditioned
elements are always applicable. Filtering therefore only ever narrows the
model, and the empty profile is the identity.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import TailoringError, UnknownProfileError
from .store import ModelSnapshot, ProcessElement


@dataclass(frozen=True)
class TailoringProfile:
    """Immutable characteristic assignment, e.g. projectType=dev."""

    selections: Mapping[str, str]

    @classmethod
    def empty(cls) -> "TailoringProfile":
        return cls(selections=MappingProxyType({}))

    @classmethod
    def of(cls, selections: Mapping[str, str]) -> "TailoringProfile":
        return cls(selections=MappingProxyType(dict(selections)))

    def __bool__(self) -> bool:
        return bool(self.selections)


def validate_profile(snapshot: ModelSnapshot, selections: Mapping[str, str]) -> TailoringProfile:
    """Check a raw selection map against the snapshot's declared characteristics."""
    for key, value in selections.items():
        char = snapshot.characteristic(key)
        if char is None:
            raise TailoringError(
                f"unknown project characteristic {key!r}", code="unknown-characteristic"
            )
        if not isinstance(value, str) or value not in char.values:
            raise TailoringError(
                f"characteristic {key!r} has no value {value!r} "
                f"(declared: {', '.join(char.values)})",
                code="unknown-value",
            )
    return TailoringProfile.of(selections)


def parse_profile(document: str | bytes, snapshot: ModelSnapshot | None = None) -> TailoringProfile:
    """Parse the JSON profile format: an object of characteristic -> value.

    With a snapshot, selections are validated against its characteristics.
    """
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise TailoringError(f"profile is not valid JSON: {exc}", code="schema-violation")
    if isinstance(data, dict) and isinstance(data.get("selections"), dict):
        data = data["selections"]
    if not isinstance(data, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in data.items()
    ):
        raise TailoringError(
            "profile must be a JSON object mapping characteristic keys to values",
            code="schema-violation",
        )
    if snapshot is not None:
        return validate_profile(snapshot, data)
    return TailoringProfile.of(data)


def serialize_profile(name: str, profile: TailoringProfile) -> str:
    return json.dumps({"name": name, "selections": dict(profile.selections)}, indent=2)


def is_applicable(element: ProcessElement, profile: TailoringProfile) -> bool:
    """Conjunction across condition keys, disjunction within each value set.

    Keys the profile leaves unset never exclude an element.
    """
    if element.condition is None:
        return True
    for key, accepted in element.condition.clauses.items():
        chosen = profile.selections.get(key)
        if chosen is not None and chosen not in accepted:
            return False
    return True


def applicable_ids(snapshot: ModelSnapshot, profile: TailoringProfile) -> frozenset[str]:
    return frozenset(
        e.id for e in snapshot.elements.values() if is_applicable(e, profile)
    )


def tailor(
    elements: Iterable[ProcessElement], profile: TailoringProfile
) -> tuple[ProcessElement, ...]:
    """Keep applicable elements, preserving the given order."""
    return tuple(e for e in elements if is_applicable(e, profile))


@dataclass(frozen=True)
class StoredProfile:
    id: str
    name: str
    variant: str
    profile: TailoringProfile


class ProfileStore:
    """Server-side named profiles. Saving the same name twice yields distinct ids."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._profiles: dict[str, StoredProfile] = {}

    def save(self, name: str, variant: str, profile: TailoringProfile) -> StoredProfile:
        if not name:
            raise TailoringError("profile name must not be empty", code="schema-violation")
        stored = StoredProfile(
            id=uuid.uuid4().hex, name=name, variant=variant, profile=profile
        )
        with self._lock:
            self._profiles[stored.id] = stored
        return stored

    def get(self, profile_id: str) -> StoredProfile:
        stored = self._profiles.get(profile_id)
        if stored is None:
            raise UnknownProfileError(f"no stored profile {profile_id!r}")
        return stored

    def list(self) -> list[StoredProfile]:
        return sorted(self._profiles.values(), key=lambda p: (p.name, p.id))
