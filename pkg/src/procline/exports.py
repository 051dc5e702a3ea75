"""Artifact generation from a tailored snapshot.

Three bundle kinds: a static HTML documentation site, plain-text document
templates for work products, and a JSON project-plan skeleton. Generation is
deterministic: same snapshot and profile yield byte-identical files, with the
manifest timestamp as the only varying part.
"""

from __future__ import annotations

import base64
import html
import io
import json
import re
import zipfile
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .errors import UnsupportedExportError
from .metamodel import Metamodel
from .projection import visible_attributes
from .store import ModelSnapshot, ProcessElement
from .tailoring import TailoringProfile, is_applicable

EXPORT_KINDS = ("process-doc", "doc-templates", "project-plan")

ARCHIVE_ENTRY_TIME = (2020, 1, 1, 0, 0, 0)

_ASSET_TOKEN = re.compile(r"asset:([A-Za-z0-9._-]+)")


@dataclass
class ExportBundle:
    kind: str
    files: dict[str, bytes]
    manifest: dict = field(default_factory=dict)


def _manifest(kind: str, snapshot: ModelSnapshot, profile: TailoringProfile) -> dict:
    return {
        "kind": kind,
        "variant": snapshot.variant,
        "version": snapshot.version,
        "profile": dict(profile.selections),
        "generated": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def _inline_assets(snapshot: ModelSnapshot, markup: str) -> str:
    """Replace asset:ID tokens with data URIs so pages are self-contained."""

    def substitute(match: re.Match) -> str:
        asset = snapshot.assets.get(match.group(1))
        if asset is None:
            return match.group(0)
        encoded = base64.b64encode(asset.payload).decode("ascii")
        return f"data:{asset.media_type};base64,{encoded}"

    return _ASSET_TOKEN.sub(substitute, markup)


def navigation_closure(
    snapshot: ModelSnapshot, mm: Metamodel, profile: TailoringProfile
) -> list[ProcessElement]:
    """Elements reachable by browsing: endpoint collections plus followed links.

    Starts from applicable elements of endpoint types and transitively follows
    tailored associations of every reached element, in document order.
    """
    endpoint_names = {t.name for t in mm.endpoint_types()}
    reached: dict[str, ProcessElement] = {}
    queue = [
        e
        for e in snapshot.elements.values()
        if e.type_name in endpoint_names and is_applicable(e, profile)
    ]
    while queue:
        element = queue.pop(0)
        if element.id in reached:
            continue
        reached[element.id] = element
        for assoc in mm.outgoing(element.type_name):
            pool = element.children if assoc.kind == "composition" else element.references
            for target_id in pool.get(assoc.key, ()):
                target = snapshot.elements[target_id]
                if target.id not in reached and is_applicable(target, profile):
                    queue.append(target)
    # re-sort into document order for deterministic page listing
    order = {eid: i for i, eid in enumerate(snapshot.elements)}
    return sorted(reached.values(), key=lambda e: order[e.id])


def _page_name(element: ProcessElement) -> str:
    return f"{element.type_name.lower()}-{element.id}.html"


_STYLE = """\
body { font-family: Georgia, serif; margin: 2rem auto; max-width: 46rem; padding: 0 1rem; }
h1 { border-bottom: 2px solid #345; padding-bottom: 0.3rem; }
dt { font-weight: bold; margin-top: 0.6rem; }
nav a { margin-right: 0.8rem; }
ul.links { list-style: square; }
footer { margin-top: 3rem; color: #667; font-size: 0.85rem; }
"""


def _html_page(title: str, body: str) -> bytes:
    return (
        "<!DOCTYPE html>\n"
        '<html lang="en">\n<head>\n<meta charset="utf-8">\n'
        f"<title>{html.escape(title)}</title>\n<style>\n{_STYLE}</style>\n</head>\n"
        f"<body>\n{body}\n</body>\n</html>\n"
    ).encode("utf-8")


def generate_process_doc(
    snapshot: ModelSnapshot, mm: Metamodel, profile: TailoringProfile
) -> ExportBundle:
    """Static documentation site: index plus one page per reachable element."""
    reached = navigation_closure(snapshot, mm, profile)
    files: dict[str, bytes] = {}

    for element in reached:
        etype = mm.type(element.type_name)
        parts = [f"<h1>{html.escape(element.name)}</h1>"]
        parts.append(f"<p><em>{html.escape(etype.name)}</em> &middot; id {html.escape(element.id)}</p>")
        rows = []
        for attr in visible_attributes(etype, "by-id"):
            value = element.attribute_values.get(attr.name)
            if value is None or attr.name in ("id", "name"):
                continue
            if attr.kind == "html-text":
                rendered = _inline_assets(snapshot, value)
            else:
                rendered = html.escape(value)
            rows.append(f"<dt>{html.escape(attr.name)}</dt><dd>{rendered}</dd>")
        if rows:
            parts.append("<dl>" + "".join(rows) + "</dl>")
        for assoc in mm.outgoing(etype.name):
            pool = element.children if assoc.kind == "composition" else element.references
            targets = [
                snapshot.elements[tid]
                for tid in pool.get(assoc.key, ())
                if is_applicable(snapshot.elements[tid], profile)
            ]
            if not targets:
                continue
            parts.append(f"<h2>{html.escape(assoc.wrapper_tag)}</h2>")
            links = "".join(
                f'<li><a href="{_page_name(t)}">{html.escape(t.name)}</a></li>'
                for t in targets
            )
            parts.append(f'<ul class="links">{links}</ul>')
        parts.append('<footer><a href="index.html">Back to index</a></footer>')
        files[_page_name(element)] = _html_page(element.name, "\n".join(parts))

    sections = []
    for etype in mm.endpoint_types():
        members = [e for e in reached if e.type_name == etype.name]
        if not members:
            continue
        links = "".join(
            f'<li><a href="{_page_name(e)}">{html.escape(e.name)}</a></li>' for e in members
        )
        sections.append(f"<h2>{html.escape(etype.name)}</h2>\n<ul class=\"links\">{links}</ul>")
    index_body = (
        f"<h1>{html.escape(snapshot.variant)} {html.escape(snapshot.version)}</h1>\n"
        + "\n".join(sections)
    )
    files["index.html"] = _html_page(f"{snapshot.variant} {snapshot.version}", index_body)

    return ExportBundle(
        kind="process-doc", files=files, manifest=_manifest("process-doc", snapshot, profile)
    )


def generate_doc_templates(
    snapshot: ModelSnapshot, mm: Metamodel, profile: TailoringProfile
) -> ExportBundle:
    """One markdown skeleton per applicable element of the work-product role."""
    wp_types = mm.types_with_role("workproduct")
    if not wp_types:
        raise UnsupportedExportError(
            "the metamodel declares no type with the workproduct role"
        )
    wp_names = {t.name for t in wp_types}
    files: dict[str, bytes] = {}
    for element in snapshot.elements.values():
        if element.type_name not in wp_names or not is_applicable(element, profile):
            continue
        etype = mm.type(element.type_name)
        lines = [f"# {element.name}", ""]
        description = element.attribute_values.get("description")
        if description is not None:
            lines.extend([description, ""])
        for attr in etype.attributes:
            if attr.visibility != "protected":
                continue
            heading = attr.name[0].upper() + attr.name[1:]
            lines.append(f"## {heading}")
            lines.append("")
            value = element.attribute_values.get(attr.name)
            lines.append(value if value is not None else "_To be completed._")
            lines.append("")
        files[f"{element.id}.md"] = ("\n".join(lines)).encode("utf-8")
    return ExportBundle(
        kind="doc-templates",
        files=files,
        manifest=_manifest("doc-templates", snapshot, profile),
    )


def _plan_entry(
    snapshot: ModelSnapshot,
    mm: Metamodel,
    element: ProcessElement,
    parent: str | None,
    profile: TailoringProfile,
) -> dict:
    entries = []
    for assoc in mm.outgoing(element.type_name):
        if assoc.kind != "composition":
            continue
        for child_id in element.children.get(assoc.key, ()):
            child = snapshot.elements[child_id]
            if is_applicable(child, profile):
                entries.append(_plan_entry(snapshot, mm, child, element.id, profile))
    return {"id": element.id, "name": element.name, "parent": parent, "entries": entries}


def generate_project_plan(
    snapshot: ModelSnapshot, mm: Metamodel, profile: TailoringProfile
) -> ExportBundle:
    """JSON skeleton of plan-role elements with their tailored sub-structure."""
    plan_names = {t.name for t in mm.types_with_role("plan")}
    roots = [
        e
        for e in snapshot.elements.values()
        if e.type_name in plan_names and is_applicable(e, profile)
    ]
    plan = {
        "variant": snapshot.variant,
        "version": snapshot.version,
        "entries": [_plan_entry(snapshot, mm, root, None, profile) for root in roots],
    }
    payload = (json.dumps(plan, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    return ExportBundle(
        kind="project-plan",
        files={"plan.json": payload},
        manifest=_manifest("project-plan", snapshot, profile),
    )


_GENERATORS = {
    "process-doc": generate_process_doc,
    "doc-templates": generate_doc_templates,
    "project-plan": generate_project_plan,
}


def generate_export(
    kind: str, snapshot: ModelSnapshot, mm: Metamodel, profile: TailoringProfile
) -> ExportBundle:
    generator = _GENERATORS.get(kind)
    if generator is None:
        raise UnsupportedExportError(
            f"unknown export kind {kind!r} (expected one of {', '.join(EXPORT_KINDS)})"
        )
    return generator(snapshot, mm, profile)


def build_archive(bundle: ExportBundle) -> bytes:
    """Zip the bundle with fixed entry timestamps for reproducible output."""
    buffer = io.BytesIO()
    manifest_bytes = (json.dumps(bundle.manifest, indent=2) + "\n").encode("utf-8")
    entries = dict(bundle.files)
    entries["manifest.json"] = manifest_bytes
    with zipfile.ZipFile(buffer, "w", zipfile.ZIP_DEFLATED) as archive:
        for path in sorted(entries):
            info = zipfile.ZipInfo(path, date_time=ARCHIVE_ENTRY_TIME)
            info.compress_type = zipfile.ZIP_DEFLATED
            info.external_attr = 0o644 << 16
            archive.writestr(info, entries[path])
    return buffer.getvalue()
