"""Response projection: visibility rules, association embedding, XML rendering.

Builds abstract response trees for the three route kinds and serializes them
to the XML wire format. Attribute visibility depends on how an element is
reached: direct by-id access exposes everything, embedded aggregated targets
add protected attributes, every other context shows public attributes only.
Public attributes render as XML attributes; protected and private ones render
as capitalized child elements. Multi-valued associations are wrapped in a
container node named after the member tag plus "s".
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    FilteredElementError,
    UnknownAssociationError,
    UnknownElementError,
    UnknownTypeError,
)
from .metamodel import Association, AttributeDef, ElementType, Metamodel
from .store import ModelSnapshot, ProcessElement
from .tailoring import TailoringProfile, is_applicable

ACCESS_KINDS = ("collection", "by-id", "embedded-composed", "embedded-aggregated", "reference")

# How targets are reached when an association is embedded or resolved.
_ASSOCIATION_ACCESS = {
    "composition": "embedded-composed",
    "aggregation": "embedded-aggregated",
    "directed": "reference",
}


@dataclass
class XmlNode:
    tag: str
    attributes: dict[str, str] = field(default_factory=dict)
    children: list["XmlNode"] = field(default_factory=list)
    text: str | None = None


@dataclass
class ResponseDoc:
    root: XmlNode


def visible_attributes(etype: ElementType, access: str) -> tuple[AttributeDef, ...]:
    """Attributes exposed for the given access context, in declaration order."""
    if access not in ACCESS_KINDS:
        raise ValueError(f"unknown access context {access!r}")
    if access == "by-id":
        allowed = ("public", "protected", "private")
    elif access == "embedded-aggregated":
        allowed = ("public", "protected")
    else:
        allowed = ("public",)
    return tuple(attr for attr in etype.attributes if attr.visibility in allowed)


def _capitalize(name: str) -> str:
    return name[0].upper() + name[1:] if name else name


def element_node(
    etype: ElementType, element: ProcessElement, access: str, tag: str | None = None
) -> XmlNode:
    """Render one element for an access context, without association content.

    Public attributes become XML attributes, the rest become capitalized child
    elements; attributes absent from the instance are omitted entirely.
    """
    node = XmlNode(tag=tag or etype.name)
    for attr in visible_attributes(etype, access):
        value = element.attribute_values.get(attr.name)
        if value is None:
            continue
        if attr.visibility == "public":
            node.attributes[attr.name] = value
        else:
            node.children.append(XmlNode(tag=_capitalize(attr.name), text=value))
    return node


def _require_type(mm: Metamodel, type_name: str) -> ElementType:
    etype = mm.type(type_name)
    if etype is None:
        raise UnknownTypeError(f"unknown element type {type_name!r}")
    return etype


def _require_element(
    snapshot: ModelSnapshot, type_name: str, element_id: str, profile: TailoringProfile
) -> ProcessElement:
    element = snapshot.elements.get(element_id)
    if element is None or element.type_name != type_name:
        raise UnknownElementError(f"no {type_name!r} element with id {element_id!r}")
    if not is_applicable(element, profile):
        raise FilteredElementError(
            f"element {element_id!r} is not part of the tailored process"
        )
    return element


def _targets(
    snapshot: ModelSnapshot,
    element: ProcessElement,
    assoc: Association,
    profile: TailoringProfile,
) -> list[ProcessElement]:
    source = element.children if assoc.kind == "composition" else element.references
    ids = source.get(assoc.key, ())
    matched = []
    for target_id in ids:
        target = snapshot.elements[target_id]
        if is_applicable(target, profile):
            matched.append(target)
    return matched


def _association_content(
    snapshot: ModelSnapshot,
    mm: Metamodel,
    element: ProcessElement,
    assoc: Association,
    profile: TailoringProfile,
) -> list[XmlNode]:
    """Wrapper node (multiplicity many) or bare target node (multiplicity 1)."""
    target_type = _require_type(mm, assoc.target)
    access = _ASSOCIATION_ACCESS[assoc.kind]
    nodes = [
        element_node(target_type, target, access, tag=assoc.node_tag)
        for target in _targets(snapshot, element, assoc, profile)
    ]
    if assoc.multiplicity_upper == "many":
        return [XmlNode(tag=assoc.wrapper_tag, children=nodes)]
    return nodes  # at most one; no wrapper for single-valued associations


def project_collection(
    snapshot: ModelSnapshot, mm: Metamodel, type_name: str, profile: TailoringProfile
) -> ResponseDoc:
    """All applicable elements of an endpoint type, public attributes only."""
    etype = _require_type(mm, type_name)
    root = XmlNode(tag="response")
    for element in snapshot.elements_of(etype.name):
        if is_applicable(element, profile):
            root.children.append(element_node(etype, element, "collection"))
    return ResponseDoc(root=root)


def project_element(
    snapshot: ModelSnapshot,
    mm: Metamodel,
    type_name: str,
    element_id: str,
    profile: TailoringProfile,
) -> ResponseDoc:
    """Direct by-id access: full attribute set plus all embedded associations."""
    etype = _require_type(mm, type_name)
    element = _require_element(snapshot, etype.name, element_id, profile)
    root = element_node(etype, element, "by-id")
    for assoc in mm.outgoing(etype.name):
        root.children.extend(_association_content(snapshot, mm, element, assoc, profile))
    return ResponseDoc(root=root)


def resolve_association(
    snapshot: ModelSnapshot,
    mm: Metamodel,
    type_name: str,
    element_id: str,
    assoc_segment: str,
    profile: TailoringProfile,
) -> ResponseDoc:
    """Navigate one association of one element: response-wrapped target list."""
    etype = _require_type(mm, type_name)
    assoc = next(
        (a for a in mm.outgoing(etype.name) if a.segment == assoc_segment), None
    )
    if assoc is None:
        raise UnknownAssociationError(
            f"type {etype.name!r} has no association segment {assoc_segment!r}"
        )
    element = _require_element(snapshot, etype.name, element_id, profile)
    source_node = element_node(etype, element, "collection")
    source_node.children.extend(
        _association_content(snapshot, mm, element, assoc, profile)
    )
    return ResponseDoc(root=XmlNode(tag="response", children=[source_node]))


_ATTR_ESCAPES = {
    "&": "&amp;",
    "<": "&lt;",
    ">": "&gt;",
    '"': "&quot;",
    "\n": "&#10;",
    "\r": "&#13;",
    "\t": "&#9;",
}


def _escape_attr(value: str) -> str:
    for char, ref in _ATTR_ESCAPES.items():
        value = value.replace(char, ref)
    return value


def _escape_text(value: str) -> str:
    return value.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _write_node(node: XmlNode, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    attrs = "".join(f' {name}="{_escape_attr(value)}"' for name, value in node.attributes.items())
    if node.children:
        out.append(f"{pad}<{node.tag}{attrs}>")
        for child in node.children:
            _write_node(child, indent + 1, out)
        out.append(f"{pad}</{node.tag}>")
    elif node.text is not None:
        out.append(f"{pad}<{node.tag}{attrs}>{_escape_text(node.text)}</{node.tag}>")
    else:
        out.append(f"{pad}<{node.tag}{attrs}/>")


def render_xml(doc: ResponseDoc) -> bytes:
    """Deterministic UTF-8 serialization with a fixed declaration line."""
    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    _write_node(doc.root, 0, lines)
    return ("\n".join(lines) + "\n").encode("utf-8")
