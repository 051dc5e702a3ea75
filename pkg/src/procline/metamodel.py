"""Conceptual process metamodel: element types, associations, and the route table.

The metamodel is written in a small structured-text format (see ``parse_metamodel``)
and, once it passes the modeling conventions, deterministically yields the
browsable route surface: one collection and one by-id route per endpoint type,
plus one nested route per association.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ConventionsError, MetamodelError, MetamodelSyntaxError, RouteCollisionError

VISIBILITIES = ("public", "protected", "private")
ATTRIBUTE_KINDS = ("string", "integer", "html-text")
ASSOCIATION_KINDS = ("composition", "aggregation", "directed")

# Type, attribute, and association names become XML tags and path segments.
NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
# Identifiers for model names, element ids, variants, versions ("2.3", "fixture-a").
IDENT_RE = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9._-]*$")


@dataclass(frozen=True)
class AttributeDef:
    name: str
    kind: str = "string"
    visibility: str = "public"


@dataclass(frozen=True)
class ElementType:
    name: str
    is_endpoint: bool = False
    attributes: tuple[AttributeDef, ...] = ()
    roles: frozenset[str] = frozenset()
    extends: str | None = None

    def attribute(self, name: str) -> AttributeDef | None:
        for attr in self.attributes:
            if attr.name == name:
                return attr
        return None

    def has_visible(self, name: str, visibility: str) -> bool:
        attr = self.attribute(name)
        return attr is not None and attr.visibility == visibility


@dataclass(frozen=True)
class Association:
    source: str
    target: str
    kind: str
    name: str | None = None
    multiplicity_upper: str = "many"  # "1" or "many"

    @property
    def key(self) -> str:
        """The name under which instance documents and responses address this
        association: its name when it has one, the target type name otherwise."""
        return self.name or self.target

    @property
    def segment(self) -> str:
        """Nested-route path segment. Compositions always navigate by target
        type; the other kinds navigate by association name when present."""
        if self.kind == "composition":
            return self.target.lower()
        return self.key.lower()

    @property
    def node_tag(self) -> str:
        """Tag of one matched target in a response: directed associations tag
        targets with the association name, the embedding kinds with the type."""
        if self.kind == "directed" and self.name:
            return self.name
        return self.target

    @property
    def wrapper_tag(self) -> str:
        return self.node_tag + "s"


@dataclass(frozen=True)
class Metamodel:
    name: str
    element_types: tuple[ElementType, ...]
    associations: tuple[Association, ...]
    _types_by_name: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        by_name: dict[str, ElementType] = {}
        for etype in self.element_types:
            if not etype.name or not NAME_RE.match(etype.name):
                raise MetamodelError(f"invalid element type name {etype.name!r}")
            if etype.name in by_name:
                raise MetamodelError(f"duplicate type name {etype.name!r}")
            seen_attrs = set()
            for attr in etype.attributes:
                if not NAME_RE.match(attr.name):
                    raise MetamodelError(f"invalid attribute name {attr.name!r} in {etype.name}")
                if attr.kind not in ATTRIBUTE_KINDS:
                    raise MetamodelError(f"unknown attribute kind {attr.kind!r} in {etype.name}")
                if attr.visibility not in VISIBILITIES:
                    raise MetamodelError(f"unknown visibility {attr.visibility!r} in {etype.name}")
                if attr.name in seen_attrs:
                    raise MetamodelError(f"duplicate attribute {attr.name!r} in type {etype.name}")
                seen_attrs.add(attr.name)
            by_name[etype.name] = etype
        for assoc in self.associations:
            if assoc.kind not in ASSOCIATION_KINDS:
                raise MetamodelError(f"unknown association kind {assoc.kind!r}")
            for end in (assoc.source, assoc.target):
                if end not in by_name:
                    raise MetamodelError(f"association references unknown type {end!r}")
            if assoc.name is not None and not NAME_RE.match(assoc.name):
                raise MetamodelError(f"invalid association name {assoc.name!r}")
            if assoc.multiplicity_upper not in ("1", "many"):
                raise MetamodelError(f"invalid multiplicity {assoc.multiplicity_upper!r}")
        object.__setattr__(self, "_types_by_name", by_name)

    def type(self, name: str) -> ElementType | None:
        return self._types_by_name.get(name)

    def endpoint_types(self) -> tuple[ElementType, ...]:
        return tuple(t for t in self.element_types if t.is_endpoint)

    def outgoing(self, type_name: str) -> tuple[Association, ...]:
        return tuple(a for a in self.associations if a.source == type_name)

    def types_with_role(self, role: str) -> tuple[ElementType, ...]:
        return tuple(t for t in self.element_types if role in t.roles)


@dataclass(frozen=True)
class Finding:
    rule_id: str
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.rule_id} at {self.location}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.findings


@dataclass(frozen=True)
class RouteSpec:
    pattern: str
    kind: str  # "collection" | "by-id" | "nested"
    source_type: str
    target_type: str
    association: Association | None = None


@dataclass(frozen=True)
class RouteTable:
    routes: tuple[RouteSpec, ...]

    def collection(self, segment: str) -> RouteSpec | None:
        for r in self.routes:
            if r.kind == "collection" and r.pattern == f"api/{segment}":
                return r
        return None

    def by_id(self, segment: str) -> RouteSpec | None:
        for r in self.routes:
            if r.kind == "by-id" and r.pattern.startswith(f"api/{segment}/"):
                return r
        return None

    def nested(self, source_segment: str, assoc_segment: str) -> RouteSpec | None:
        for r in self.routes:
            if (
                r.kind == "nested"
                and r.source_type.lower() == source_segment
                and r.association is not None
                and r.association.segment == assoc_segment
            ):
                return r
        return None


# ---------------------------------------------------------------------------
# Parsing


_ASSOC_RE = re.compile(
    r"^(?P<source>[A-Za-z_]\w*)\s+(?P<kind>\w[\w-]*)\s*"
    r"\(\s*(?:(?P<name>[A-Za-z_]\w*)\s*,\s*)?(?P<upper>1|many)\s*\)\s+"
    r"(?P<target>[A-Za-z_]\w*)$"
)

_TYPE_DECL_RE = re.compile(
    r"^(?P<name>[A-Za-z_]\w*)"
    r"(?:\s+extends\s+(?P<base>[A-Za-z_]\w*))?"
    r"(?:\s*\[(?P<tags>[^\]]*)\])?\s*:$"
)

_ATTR_RE = re.compile(
    r"^(?P<name>[A-Za-z_]\w*)\s*:\s*(?P<kind>[\w-]+)\s+(?P<visibility>[\w-]+)$"
)


def _parse_tags(raw: str, line_no: int) -> tuple[bool, frozenset[str]]:
    is_endpoint = False
    roles = set()
    for tag in (t.strip() for t in raw.split(",")):
        if not tag:
            continue
        if tag == "endpoint":
            is_endpoint = True
        elif tag.endswith("-role") and len(tag) > len("-role"):
            roles.add(tag[: -len("-role")])
        else:
            raise MetamodelSyntaxError(f"unknown type tag {tag!r}", line=line_no)
    return is_endpoint, frozenset(roles)


def parse_metamodel(document: str | bytes) -> Metamodel:
    """Parse a metamodel description document.

    The format is line-oriented, indentation-structured text::

        metamodel fixture-a

        types:
          Discipline [endpoint, plan-role]:
            id: string public
            name: string public
          WorkProduct [endpoint, workproduct-role]:
            id: string public
            name: string public

        associations:
          Discipline composition(many) WorkProduct

    ``#`` starts a full-line comment. Visibility is one of public, protected,
    private; attribute kinds are string, integer, html-text; association kinds
    are composition (unnamed), aggregation, and directed (named).
    """
    if isinstance(document, bytes):
        document = document.decode("utf-8")

    name = "process"
    section = None  # None | "types" | "associations"
    types: list[dict] = []  # staged decls, materialized at the end
    type_names: set[str] = set()
    assocs: list[Association] = []
    current: dict | None = None
    type_indent: int | None = None

    for line_no, raw in enumerate(document.splitlines(), start=1):
        if "\t" in raw:
            raise MetamodelSyntaxError("tabs are not allowed, indent with spaces", line=line_no)
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        indent = len(raw) - len(raw.lstrip(" "))

        if indent == 0:
            current = None
            type_indent = None
            if stripped.startswith("metamodel"):
                parts = stripped.split()
                if len(parts) != 2 or not IDENT_RE.match(parts[1]):
                    raise MetamodelSyntaxError("expected 'metamodel <name>'", line=line_no)
                name = parts[1]
                section = None
            elif stripped == "types:":
                section = "types"
            elif stripped == "associations:":
                section = "associations"
            else:
                raise MetamodelSyntaxError(
                    f"unexpected top-level line {stripped!r} "
                    "(expected 'metamodel <name>', 'types:' or 'associations:')",
                    line=line_no,
                )
            continue

        if section == "types":
            decl = _TYPE_DECL_RE.match(stripped)
            if type_indent is None or indent <= type_indent:
                # a new type declaration
                if not decl:
                    raise MetamodelSyntaxError(
                        f"expected a type declaration, got {stripped!r}", line=line_no
                    )
                if type_indent is not None and indent != type_indent:
                    raise MetamodelSyntaxError("inconsistent type indentation", line=line_no)
                type_indent = indent
                type_name = decl.group("name")
                if type_name in type_names:
                    raise MetamodelSyntaxError(
                        f"duplicate type name {type_name!r}", line=line_no
                    )
                type_names.add(type_name)
                is_endpoint, roles = _parse_tags(decl.group("tags") or "", line_no)
                current = {
                    "name": type_name,
                    "is_endpoint": is_endpoint,
                    "roles": roles,
                    "extends": decl.group("base"),
                    "attrs": [],
                    "attr_names": set(),
                    "line": line_no,
                }
                types.append(current)
            else:
                if current is None:
                    raise MetamodelSyntaxError("attribute outside a type", line=line_no)
                attr = _ATTR_RE.match(stripped)
                if not attr:
                    raise MetamodelSyntaxError(
                        f"expected 'name: kind visibility', got {stripped!r}", line=line_no
                    )
                kind = attr.group("kind")
                visibility = attr.group("visibility")
                if kind not in ATTRIBUTE_KINDS:
                    raise MetamodelSyntaxError(f"unknown attribute kind {kind!r}", line=line_no)
                if visibility not in VISIBILITIES:
                    raise MetamodelSyntaxError(
                        f"unknown visibility keyword {visibility!r}", line=line_no
                    )
                attr_name = attr.group("name")
                if attr_name in current["attr_names"]:
                    raise MetamodelSyntaxError(
                        f"duplicate attribute {attr_name!r} in type {current['name']}",
                        line=line_no,
                    )
                current["attr_names"].add(attr_name)
                current["attrs"].append(AttributeDef(attr_name, kind, visibility))
        elif section == "associations":
            m = _ASSOC_RE.match(stripped)
            if not m:
                raise MetamodelSyntaxError(
                    f"expected 'Source kind(name, upper) Target', got {stripped!r}",
                    line=line_no,
                )
            kind = m.group("kind")
            if kind not in ASSOCIATION_KINDS:
                raise MetamodelSyntaxError(f"unknown association kind {kind!r}", line=line_no)
            if kind == "composition" and m.group("name"):
                raise MetamodelSyntaxError(
                    "compositions navigate by target type and do not take a name",
                    line=line_no,
                )
            for end in (m.group("source"), m.group("target")):
                if end not in type_names:
                    raise MetamodelSyntaxError(
                        f"association references unknown type {end!r}", line=line_no
                    )
            assocs.append(
                Association(
                    source=m.group("source"),
                    target=m.group("target"),
                    kind=kind,
                    name=m.group("name"),
                    multiplicity_upper=m.group("upper"),
                )
            )
        else:
            raise MetamodelSyntaxError(
                "indented line outside of a 'types:' or 'associations:' section",
                line=line_no,
            )

    if not types:
        raise MetamodelSyntaxError("no element types defined")
    for staged in types:
        if staged["extends"] and staged["extends"] not in type_names:
            raise MetamodelSyntaxError(
                f"unknown base type {staged['extends']!r}", line=staged["line"]
            )

    element_types = tuple(
        ElementType(
            name=t["name"],
            is_endpoint=t["is_endpoint"],
            attributes=tuple(t["attrs"]),
            roles=t["roles"],
            extends=t["extends"],
        )
        for t in types
    )
    return Metamodel(name=name, element_types=element_types, associations=tuple(assocs))


# ---------------------------------------------------------------------------
# Conventions


def validate_conventions(mm: Metamodel) -> ValidationReport:
    """Check the modeling conventions the route derivation relies on.

    Findings are data, not failures; a metamodel with findings parses fine but
    must be fixed before it can be published as an API.
    """
    findings: list[Finding] = []
    for etype in mm.element_types:
        if etype.is_endpoint:
            if not etype.has_visible("id", "public"):
                findings.append(
                    Finding(
                        "RULE-ENDPOINT-ID",
                        etype.name,
                        "endpoint types must declare a public 'id' attribute",
                    )
                )
            if not etype.has_visible("name", "public"):
                findings.append(
                    Finding(
                        "RULE-ENDPOINT-NAME",
                        etype.name,
                        "endpoint types must declare a public 'name' attribute",
                    )
                )
        if etype.extends is not None:
            findings.append(
                Finding(
                    "RULE-NO-INHERITANCE",
                    etype.name,
                    "type generalization is not supported; flatten the attributes",
                )
            )
    for assoc in mm.associations:
        if assoc.kind == "directed" and not assoc.name:
            findings.append(
                Finding(
                    "RULE-DIRECTED-NAME",
                    f"{assoc.source}->{assoc.target}",
                    "directed associations must be named; the name is the query's return type",
                )
            )
    for etype in mm.element_types:
        seen: dict[str, Association] = {}
        for assoc in mm.outgoing(etype.name):
            if assoc.kind == "directed" and not assoc.name:
                continue  # already reported above; segment would be a fallback
            if assoc.segment in seen:
                findings.append(
                    Finding(
                        "RULE-SEGMENT-CLASH",
                        etype.name,
                        f"two outgoing associations share the route segment {assoc.segment!r}",
                    )
                )
            else:
                seen[assoc.segment] = assoc
    return ValidationReport(findings=tuple(findings))


# ---------------------------------------------------------------------------
# Route derivation


def derive_route_table(mm: Metamodel) -> RouteTable:
    """Derive the browsable endpoint surface from a convention-clean metamodel."""
    report = validate_conventions(mm)
    if not report.ok:
        rules = ", ".join(sorted({f.rule_id for f in report.findings}))
        raise ConventionsError(f"metamodel violates modeling conventions: {rules}")

    routes: list[RouteSpec] = []
    for etype in mm.endpoint_types():
        seg = etype.name.lower()
        routes.append(RouteSpec(f"api/{seg}", "collection", etype.name, etype.name))
        routes.append(RouteSpec(f"api/{seg}/{{{seg}Id}}", "by-id", etype.name, etype.name))
    for assoc in mm.associations:
        seg = assoc.source.lower()
        routes.append(
            RouteSpec(
                f"api/{seg}/{{{seg}Id}}/{assoc.segment}",
                "nested",
                assoc.source,
                assoc.target,
                association=assoc,
            )
        )

    seen: set[str] = set()
    for route in routes:
        if route.pattern in seen:
            raise RouteCollisionError(f"route pattern {route.pattern!r} derived twice")
        seen.add(route.pattern)
    return RouteTable(routes=tuple(routes))
