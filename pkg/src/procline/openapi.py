"""OpenAPI 3.0 document generation for the derived route surface.

One path item per derived route and one component schema per addressable
element type. Schemas describe the by-id message: public attributes flagged
as XML attributes, multi-valued associations as wrapped arrays whose item
properties reuse the target schema via $ref. Project characteristics become
optional enum query parameters shared by every operation.
"""

from __future__ import annotations

import json

import yaml

from .metamodel import Association, AttributeDef, ElementType, Metamodel, RouteTable
from .store import ProjectCharacteristic

OPENAPI_VERSION = "3.0.3"

_SCALAR_TYPES = {"string": "string", "integer": "integer"}

HTML_SCHEMA_NAME = "typeHtml"


def _attribute_schema(attr: AttributeDef) -> dict:
    if attr.kind == "html-text":
        return {"$ref": f"#/components/schemas/{HTML_SCHEMA_NAME}"}
    schema: dict = {"type": _SCALAR_TYPES[attr.kind]}
    if attr.visibility == "public":
        schema["xml"] = {"attribute": True}
    return schema


def _item_schema(assoc: Association, target: ElementType) -> dict:
    """Inline object for embedded targets; attribute reuse via $ref."""
    if assoc.kind == "aggregation":
        visible = ("public", "protected")
    else:
        visible = ("public",)
    properties = {
        attr.name: {"$ref": f"#/components/schemas/{target.name}/properties/{attr.name}"}
        for attr in target.attributes
        if attr.visibility in visible
    }
    return {
        "type": "object",
        "xml": {"name": assoc.node_tag},
        "properties": properties,
    }


def _association_property(assoc: Association, target: ElementType) -> dict:
    item = _item_schema(assoc, target)
    if assoc.multiplicity_upper == "many":
        return {
            "type": "array",
            "items": item,
            "xml": {"wrapped": True, "name": assoc.wrapper_tag},
        }
    return item


def _type_schema(mm: Metamodel, etype: ElementType) -> dict:
    required = [
        name
        for name in ("id", "version", "name")
        if any(a.name == name and a.visibility == "public" for a in etype.attributes)
    ]
    schema: dict = {"type": "object", "xml": {"name": etype.name}}
    if required:
        schema["required"] = required
    properties: dict = {attr.name: _attribute_schema(attr) for attr in etype.attributes}
    for assoc in mm.outgoing(etype.name):
        target = mm.type(assoc.target)
        properties[assoc.node_tag] = _association_property(assoc, target)
    schema["properties"] = properties
    return schema


def _tailoring_param_refs(characteristics: tuple[ProjectCharacteristic, ...]) -> list[dict]:
    return [
        {"$ref": f"#/components/parameters/{char.key}"} for char in characteristics
    ]


def _path_parameter(name: str) -> dict:
    return {"name": name, "in": "path", "required": True, "schema": {"type": "string"}}


def _xml_response(schema: dict, description: str) -> dict:
    return {
        "200": {
            "description": description,
            "content": {"application/xml": {"schema": schema}},
        }
    }


def generate_openapi(
    mm: Metamodel,
    routes: RouteTable,
    characteristics: tuple[ProjectCharacteristic, ...] = (),
) -> dict:
    """Build the OpenAPI document as a plain dict with stable key order."""
    schema_types: list[ElementType] = []
    needs_html = False
    for etype in mm.element_types:
        in_associations = any(
            etype.name in (a.source, a.target) for a in mm.associations
        )
        if etype.is_endpoint or in_associations:
            schema_types.append(etype)
            needs_html = needs_html or any(a.kind == "html-text" for a in etype.attributes)

    paths: dict = {}
    shared_params = _tailoring_param_refs(characteristics)
    for route in routes.routes:
        operation: dict = {"x-route-kind": route.kind, "x-source-type": route.source_type}
        id_param = f"{route.source_type.lower()}Id"
        parameters: list[dict] = []
        if route.kind == "collection":
            operation["summary"] = f"List all {route.source_type} elements"
            responses = _xml_response(
                {
                    "type": "array",
                    "items": {"$ref": f"#/components/schemas/{route.source_type}"},
                    "xml": {"name": "response", "wrapped": True},
                },
                f"All applicable {route.source_type} elements",
            )
        elif route.kind == "by-id":
            operation["summary"] = f"Get one {route.source_type} by id"
            parameters.append(_path_parameter(id_param))
            responses = _xml_response(
                {"$ref": f"#/components/schemas/{route.source_type}"},
                f"The addressed {route.source_type} element",
            )
        else:
            operation["summary"] = (
                f"Get {route.target_type} elements of one {route.source_type}"
            )
            operation["x-target-type"] = route.target_type
            if route.association is not None:
                operation["x-association"] = route.association.key
            parameters.append(_path_parameter(id_param))
            responses = _xml_response(
                {
                    "type": "object",
                    "xml": {"name": "response"},
                    "properties": {
                        route.source_type: {
                            "$ref": f"#/components/schemas/{route.source_type}"
                        }
                    },
                },
                f"Matched {route.target_type} elements",
            )
        operation["parameters"] = parameters + shared_params
        operation["responses"] = responses
        paths["/" + route.pattern] = {"get": operation}

    schemas: dict = {}
    if needs_html:
        schemas[HTML_SCHEMA_NAME] = {"type": "string", "description": "An HTML fragment"}
    for etype in schema_types:
        schemas[etype.name] = _type_schema(mm, etype)

    components: dict = {"schemas": schemas}
    if characteristics:
        components["parameters"] = {
            char.key: {
                "name": char.key,
                "in": "query",
                "required": False,
                "description": char.label,
                "schema": {"type": "string", "enum": list(char.values)},
            }
            for char in characteristics
        }

    return {
        "openapi": OPENAPI_VERSION,
        "info": {
            "title": f"{mm.name} process model API",
            "description": "Derived browsing API over the ingested process models",
            "version": "1.0.0",
        },
        "paths": paths,
        "components": components,
    }


def openapi_yaml(document: dict) -> bytes:
    return yaml.safe_dump(document, sort_keys=False, allow_unicode=True).encode("utf-8")


def openapi_json(document: dict) -> bytes:
    return (json.dumps(document, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
