"""Instance models: ingest, validation, immutable snapshots, and the variant store.

A snapshot is the fully validated instance graph of one (variant, version).
Ingest is strict: anything the metamodel does not declare is rejected, every
reference must resolve, and composition parenthood must form a forest. A
published snapshot is immutable and safe to share across concurrent readers.
"""

from __future__ import annotations

import base64
import binascii
import threading
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .errors import (
    IngestError,
    UnknownAssetError,
    UnknownVariantError,
    UnknownVersionError,
)
from .metamodel import IDENT_RE, Association, Metamodel

LATEST = "latest"


@dataclass(frozen=True)
class ProjectCharacteristic:
    key: str
    label: str
    values: tuple[str, ...]


@dataclass(frozen=True)
class ApplicabilityCondition:
    """Per-element tailoring condition: characteristic key -> accepted values."""

    clauses: Mapping[str, frozenset[str]]


@dataclass(frozen=True)
class Asset:
    id: str
    media_type: str
    payload: bytes


@dataclass(frozen=True)
class ProcessElement:
    type_name: str
    id: str
    attribute_values: Mapping[str, str]
    children: Mapping[str, tuple[str, ...]]  # composition key -> ordered child ids
    references: Mapping[str, tuple[str, ...]]  # aggregation/directed key -> target ids
    condition: ApplicabilityCondition | None = None

    @property
    def name(self) -> str:
        return self.attribute_values["name"]


@dataclass(frozen=True)
class ModelSnapshot:
    variant: str
    version: str
    elements: Mapping[str, ProcessElement]  # insertion order = document order
    characteristics: tuple[ProjectCharacteristic, ...]
    assets: Mapping[str, Asset]

    def characteristic(self, key: str) -> ProjectCharacteristic | None:
        for char in self.characteristics:
            if char.key == key:
                return char
        return None

    def elements_of(self, type_name: str) -> tuple[ProcessElement, ...]:
        return tuple(e for e in self.elements.values() if e.type_name == type_name)


def _frozen(mapping: dict) -> Mapping:
    return MappingProxyType(mapping)


def _fail(code: str, message: str) -> IngestError:
    return IngestError(message, code=code)


def _parse_characteristic(node: ET.Element, seen_keys: set[str]) -> ProjectCharacteristic:
    key = node.get("key")
    if not key or not IDENT_RE.match(key):
        raise _fail("schema-violation", "Characteristic needs a valid 'key' attribute")
    if key in seen_keys:
        raise _fail("schema-violation", f"duplicate characteristic {key!r}")
    values: list[str] = []
    for child in node:
        if child.tag != "Value":
            raise _fail("schema-violation", f"unexpected {child.tag!r} inside Characteristic")
        value = child.get("id")
        if not value or not IDENT_RE.match(value):
            raise _fail("schema-violation", f"characteristic {key!r} has a Value without an id")
        if value in values:
            raise _fail("schema-violation", f"duplicate value {value!r} in characteristic {key!r}")
        values.append(value)
    if not values:
        raise _fail("schema-violation", f"characteristic {key!r} declares no values")
    return ProjectCharacteristic(key=key, label=node.get("label", key), values=tuple(values))


def _parse_asset(node: ET.Element, asset_base: Path | None, seen: set[str]) -> Asset:
    asset_id = node.get("id")
    if not asset_id or not IDENT_RE.match(asset_id):
        raise _fail("schema-violation", "Asset needs a valid 'id' attribute")
    if asset_id in seen:
        raise _fail("schema-violation", f"duplicate asset id {asset_id!r}")
    media_type = node.get("mediaType")
    if not media_type:
        raise _fail("schema-violation", f"asset {asset_id!r} has no mediaType")
    href = node.get("href")
    if href is not None:
        if asset_base is None:
            raise _fail(
                "schema-violation",
                f"asset {asset_id!r} uses href={href!r} but no base directory was given",
            )
        payload = (asset_base / href).read_bytes()
    else:
        try:
            payload = base64.b64decode((node.text or "").strip(), validate=True)
        except (binascii.Error, ValueError):
            raise _fail("schema-violation", f"asset {asset_id!r} has invalid base64 content")
    return Asset(id=asset_id, media_type=media_type, payload=payload)


def _association_lookup(mm: Metamodel, type_name: str) -> dict[str, Association]:
    return {assoc.key: assoc for assoc in mm.outgoing(type_name)}


def _parse_element(
    mm: Metamodel,
    node: ET.Element,
    characteristics: dict[str, ProjectCharacteristic],
) -> ProcessElement:
    etype = mm.type(node.tag)
    if etype is None:
        raise _fail("schema-violation", f"unknown element type {node.tag!r}")

    values: dict[str, str] = {}
    for attr_name, raw in node.attrib.items():
        attr = etype.attribute(attr_name)
        if attr is None:
            raise _fail(
                "schema-violation",
                f"type {etype.name!r} does not declare attribute {attr_name!r}",
            )
        if attr.kind == "integer":
            try:
                raw = str(int(raw))
            except ValueError:
                raise _fail(
                    "schema-violation",
                    f"attribute {attr_name!r} of {etype.name!r} must be an integer, got {raw!r}",
                )
        values[attr_name] = raw
    element_id = values.get("id")
    if not element_id:
        raise _fail("schema-violation", f"element of type {etype.name!r} is missing an id")
    if "name" not in values:
        raise _fail("schema-violation", f"element {element_id!r} is missing a name")

    assoc_by_key = _association_lookup(mm, etype.name)
    children: dict[str, tuple[str, ...]] = {}
    references: dict[str, tuple[str, ...]] = {}
    clauses: dict[str, frozenset[str]] = {}
    for child in node:
        if child.tag in ("Children", "Refs"):
            key = child.get("assoc")
            assoc = assoc_by_key.get(key or "")
            if assoc is None:
                raise _fail(
                    "schema-violation",
                    f"element {element_id!r} lists unknown association {key!r}",
                )
            expected_container = "Children" if assoc.kind == "composition" else "Refs"
            if child.tag != expected_container:
                raise _fail(
                    "schema-violation",
                    f"association {key!r} is a {assoc.kind} and belongs in <{expected_container}>",
                )
            ids = tuple((child.text or "").split())
            if not ids:
                raise _fail("schema-violation", f"empty id list for association {key!r}")
            target_map = children if assoc.kind == "composition" else references
            if key in target_map:
                raise _fail(
                    "schema-violation",
                    f"element {element_id!r} lists association {key!r} twice",
                )
            if assoc.multiplicity_upper == "1" and len(ids) > 1:
                raise _fail(
                    "schema-violation",
                    f"association {key!r} has multiplicity 1 but {element_id!r} lists {len(ids)} targets",
                )
            target_map[key] = ids
        elif child.tag == "Condition":
            key = child.get("key")
            char = characteristics.get(key or "")
            if char is None:
                raise _fail(
                    "unknown-characteristic",
                    f"element {element_id!r} is conditioned on unknown characteristic {key!r}",
                )
            accepted = tuple(v for v in (child.get("values") or "").split(",") if v)
            if not accepted:
                raise _fail(
                    "schema-violation",
                    f"condition on {element_id!r} lists no accepted values",
                )
            for value in accepted:
                if value not in char.values:
                    raise _fail(
                        "unknown-value",
                        f"element {element_id!r} is conditioned on {key}={value!r}, "
                        f"but {key!r} only declares {', '.join(char.values)}",
                    )
            clauses[key] = clauses.get(key, frozenset()) | frozenset(accepted)
        else:
            raise _fail(
                "schema-violation",
                f"unexpected {child.tag!r} inside element {element_id!r}",
            )

    condition = ApplicabilityCondition(clauses=_frozen(clauses)) if clauses else None
    return ProcessElement(
        type_name=etype.name,
        id=element_id,
        attribute_values=_frozen(values),
        children=_frozen(children),
        references=_frozen(references),
        condition=condition,
    )


def _check_references(mm: Metamodel, elements: dict[str, ProcessElement]) -> None:
    composition_parent: dict[str, str] = {}
    for element in elements.values():
        assoc_by_key = _association_lookup(mm, element.type_name)
        for key, ids in list(element.children.items()) + list(element.references.items()):
            assoc = assoc_by_key[key]
            for target_id in ids:
                target = elements.get(target_id)
                if target is None:
                    raise _fail(
                        "dangling-reference",
                        f"element {element.id!r} references unknown id {target_id!r}",
                    )
                if target.type_name != assoc.target:
                    raise _fail(
                        "schema-violation",
                        f"association {key!r} of {element.id!r} expects {assoc.target!r} "
                        f"targets, but {target_id!r} is a {target.type_name!r}",
                    )
        for ids in element.children.values():
            for child_id in ids:
                if child_id in composition_parent:
                    raise _fail(
                        "schema-violation",
                        f"element {child_id!r} has more than one composition parent",
                    )
                composition_parent[child_id] = element.id
    # composition parenthood must be acyclic
    for start in composition_parent:
        seen = {start}
        node = composition_parent.get(start)
        while node is not None:
            if node in seen:
                raise _fail("schema-violation", f"composition cycle through {start!r}")
            seen.add(node)
            node = composition_parent.get(node)


def ingest_model(
    mm: Metamodel,
    document: bytes | str,
    variant: str | None = None,
    version: str | None = None,
    asset_base: Path | str | None = None,
) -> ModelSnapshot:
    """Validate an instance XML document against the metamodel and build a snapshot.

    ``variant``/``version`` override the declarations on the document root.
    ``asset_base`` resolves relative Asset hrefs; inline base64 assets need none.
    """
    if isinstance(document, str):
        document = document.encode("utf-8")
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise _fail("schema-violation", f"not well-formed XML: {exc}")
    if root.tag != "ProcessModel":
        raise _fail("schema-violation", f"expected <ProcessModel> root, got <{root.tag}>")

    variant = variant or root.get("variant")
    version = version or root.get("version")
    for label, value in (("variant", variant), ("version", version)):
        if not value or not IDENT_RE.match(value):
            raise _fail("schema-violation", f"missing or invalid {label} identifier: {value!r}")

    if asset_base is not None:
        asset_base = Path(asset_base)

    characteristics: dict[str, ProjectCharacteristic] = {}
    assets: dict[str, Asset] = {}
    elements: dict[str, ProcessElement] = {}
    for node in root:
        if node.tag == "Characteristic":
            char = _parse_characteristic(node, set(characteristics))
            characteristics[char.key] = char
        elif node.tag == "Asset":
            asset = _parse_asset(node, asset_base, set(assets))
            assets[asset.id] = asset
        else:
            element = _parse_element(mm, node, characteristics)
            if element.id in elements:
                raise _fail("duplicate-id", f"duplicate element id {element.id!r}")
            elements[element.id] = element
    _check_references(mm, elements)

    return ModelSnapshot(
        variant=variant,
        version=version,
        elements=_frozen(elements),
        characteristics=tuple(characteristics.values()),
        assets=_frozen(assets),
    )


def serialize_model(snapshot: ModelSnapshot) -> bytes:
    """Write a snapshot back to the canonical instance XML form.

    Assets are embedded as base64 so the output is a single self-contained file;
    re-ingesting it yields a structurally equal snapshot.
    """
    root = ET.Element("ProcessModel", {"variant": snapshot.variant, "version": snapshot.version})
    for char in snapshot.characteristics:
        node = ET.SubElement(root, "Characteristic", {"key": char.key, "label": char.label})
        for value in char.values:
            ET.SubElement(node, "Value", {"id": value})
    for element in snapshot.elements.values():
        node = ET.SubElement(root, element.type_name, dict(element.attribute_values))
        for key, ids in element.children.items():
            ET.SubElement(node, "Children", {"assoc": key}).text = " ".join(ids)
        for key, ids in element.references.items():
            ET.SubElement(node, "Refs", {"assoc": key}).text = " ".join(ids)
        if element.condition is not None:
            for key in sorted(element.condition.clauses):
                accepted = sorted(element.condition.clauses[key])
                ET.SubElement(node, "Condition", {"key": key, "values": ",".join(accepted)})
    for asset_id in sorted(snapshot.assets):
        asset = snapshot.assets[asset_id]
        node = ET.SubElement(root, "Asset", {"id": asset.id, "mediaType": asset.media_type})
        node.text = base64.b64encode(asset.payload).decode("ascii")
    ET.indent(root)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)


def get_binary(snapshot: ModelSnapshot, asset_id: str) -> tuple[bytes, str]:
    """Return the exact stored payload and media type of one asset."""
    asset = snapshot.assets.get(asset_id)
    if asset is None:
        raise UnknownAssetError(f"no asset {asset_id!r} in {snapshot.variant}/{snapshot.version}")
    return asset.payload, asset.media_type


class ModelStore:
    """Versioned snapshot registry: single writer, many concurrent readers.

    Publication is atomic — a snapshot is fully built and validated before the
    single dict assignment makes it visible, so readers observe either the old
    or the new snapshot, never a partial one.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._snapshots: dict[tuple[str, str], ModelSnapshot] = {}

    def ingest(
        self,
        mm: Metamodel,
        document: bytes | str,
        variant: str | None = None,
        version: str | None = None,
        asset_base: Path | str | None = None,
    ) -> ModelSnapshot:
        snapshot = ingest_model(mm, document, variant, version, asset_base)
        self.publish(snapshot)
        return snapshot

    def publish(self, snapshot: ModelSnapshot) -> None:
        with self._lock:
            self._snapshots[(snapshot.variant, snapshot.version)] = snapshot

    def variant_names(self) -> frozenset[str]:
        return frozenset(variant for variant, _ in self._snapshots)

    def get_snapshot(self, variant: str, version: str = LATEST) -> ModelSnapshot:
        versions = sorted(ver for var, ver in self._snapshots if var == variant)
        if not versions:
            raise UnknownVariantError(f"unknown variant {variant!r}")
        if version == LATEST:
            version = versions[-1]  # lexicographically greatest
        snapshot = self._snapshots.get((variant, version))
        if snapshot is None:
            raise UnknownVersionError(
                f"variant {variant!r} has no version {version!r} (available: {', '.join(versions)})"
            )
        return snapshot

    def list_variants(self) -> list[dict]:
        listing: dict[str, list[str]] = {}
        for variant, version in self._snapshots:
            listing.setdefault(variant, []).append(version)
        return [
            {"variant": variant, "versions": sorted(versions)}
            for variant, versions in sorted(listing.items())
        ]
