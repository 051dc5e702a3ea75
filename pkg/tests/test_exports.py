"""Export bundles: contents, tailoring, determinism, archive layout."""

import io
import json
import re
import zipfile

import pytest

from procline.errors import UnsupportedExportError
from procline.exports import (
    build_archive,
    generate_doc_templates,
    generate_export,
    generate_process_doc,
    generate_project_plan,
    navigation_closure,
)
from procline.metamodel import parse_metamodel
from procline.store import ingest_model
from procline.tailoring import TailoringProfile

EMPTY = TailoringProfile.empty()
MAINT = TailoringProfile.of({"projectType": "maint"})
HREF_RE = re.compile(r'href="([^"]+)"')


def archive_names(payload: bytes) -> list[str]:
    with zipfile.ZipFile(io.BytesIO(payload)) as z:
        return z.namelist()


def test_process_doc_page_set_empty_profile(fixture_mm, fixture_snapshot):
    bundle = generate_process_doc(fixture_snapshot, fixture_mm, EMPTY)
    assert sorted(bundle.files) == [
        "bibliographyitem-b1.html",
        "discipline-d1.html",
        "index.html",
        "methodreference-m1.html",
        "tool-t1.html",
        "workproduct-wp1.html",
        "workproduct-wp2.html",
    ]
    assert len(bundle.files) == 7


def test_process_doc_respects_tailoring(fixture_mm, fixture_snapshot):
    bundle = generate_process_doc(fixture_snapshot, fixture_mm, MAINT)
    assert "workproduct-wp1.html" not in bundle.files
    d1 = bundle.files["discipline-d1.html"].decode("utf-8")
    assert "workproduct-wp2.html" in d1
    assert "workproduct-wp1.html" not in d1
    # t1 is only referenced by the filtered wp1, so it drops out of the site
    assert "tool-t1.html" not in bundle.files


def test_process_doc_empty_snapshot(fixture_mm):
    bare = ingest_model(fixture_mm, b'<ProcessModel variant="v" version="1"/>')
    bundle = generate_process_doc(bare, fixture_mm, EMPTY)
    assert list(bundle.files) == ["index.html"]


def test_process_doc_links_resolve(fixture_mm, fixture_snapshot):
    for profile in (EMPTY, MAINT, TailoringProfile.of({"projectType": "dev"})):
        bundle = generate_process_doc(fixture_snapshot, fixture_mm, profile)
        for name, payload in bundle.files.items():
            for href in HREF_RE.findall(payload.decode("utf-8")):
                if href.startswith("data:"):
                    continue
                assert href in bundle.files, f"{name} links to missing {href}"


def test_process_doc_inlines_assets(fixture_mm):
    doc = (
        b'<ProcessModel variant="v" version="1">'
        b'<Discipline id="d9" version="1" name="Art" '
        b'description="&lt;img src=&quot;asset:pic&quot;/&gt;"/>'
        b'<Asset id="pic" mediaType="image/png">aGk=</Asset>'
        b"</ProcessModel>"
    )
    snapshot = ingest_model(fixture_mm, doc)
    bundle = generate_process_doc(snapshot, fixture_mm, EMPTY)
    page = bundle.files["discipline-d9.html"].decode("utf-8")
    assert 'src="data:image/png;base64,aGk="' in page
    assert "asset:pic" not in page


def test_navigation_closure_drops_unreferenced_targets(fixture_mm, fixture_snapshot):
    ids = {e.id for e in navigation_closure(fixture_snapshot, fixture_mm, MAINT)}
    assert ids == {"d1", "wp2", "m1", "b1"}
    full = {e.id for e in navigation_closure(fixture_snapshot, fixture_mm, EMPTY)}
    assert full == {"d1", "wp1", "wp2", "t1", "m1", "b1"}


def test_doc_templates_counts(fixture_mm, fixture_snapshot):
    bundle = generate_doc_templates(fixture_snapshot, fixture_mm, EMPTY)
    assert sorted(bundle.files) == ["wp1.md", "wp2.md"]
    maint = generate_doc_templates(fixture_snapshot, fixture_mm, MAINT)
    assert sorted(maint.files) == ["wp2.md"]


def test_doc_template_structure(fixture_mm, fixture_snapshot):
    bundle = generate_doc_templates(fixture_snapshot, fixture_mm, EMPTY)
    text = bundle.files["wp1.md"].decode("utf-8")
    assert text.startswith("# Project Plan\n")
    assert "<p>The master plan covering scope, schedule, and staffing.</p>" in text
    assert "## AcceptanceCriteria" in text
    assert "_To be completed._" in text  # no value in the model, so a stub


def test_doc_templates_need_workproduct_role():
    mm = parse_metamodel(
        "types:\n  Phase [endpoint]:\n    id: string public\n    name: string public\n"
    )
    snapshot = ingest_model(mm, b'<ProcessModel variant="v" version="1"/>')
    with pytest.raises(UnsupportedExportError):
        generate_doc_templates(snapshot, mm, EMPTY)


def test_doc_templates_zero_work_products_is_fine(fixture_mm):
    bare = ingest_model(fixture_mm, b'<ProcessModel variant="v" version="1"/>')
    bundle = generate_doc_templates(bare, fixture_mm, EMPTY)
    assert bundle.files == {}
    assert bundle.manifest["kind"] == "doc-templates"


def test_project_plan_structure(fixture_mm, fixture_snapshot):
    bundle = generate_project_plan(fixture_snapshot, fixture_mm, EMPTY)
    plan = json.loads(bundle.files["plan.json"])
    assert plan["variant"] == "base"
    assert len(plan["entries"]) == 1
    root = plan["entries"][0]
    assert (root["id"], root["name"], root["parent"]) == ("d1", "Planning", None)
    assert [(e["id"], e["parent"]) for e in root["entries"]] == [
        ("wp1", "d1"),
        ("wp2", "d1"),
    ]


def test_project_plan_tailored_subtree_absent(fixture_mm, fixture_snapshot):
    plan = json.loads(
        generate_project_plan(fixture_snapshot, fixture_mm, MAINT).files["plan.json"]
    )
    ids = [e["id"] for e in plan["entries"][0]["entries"]]
    assert ids == ["wp2"]


def test_project_plan_empty_snapshot(fixture_mm):
    bare = ingest_model(fixture_mm, b'<ProcessModel variant="v" version="1"/>')
    plan = json.loads(generate_project_plan(bare, fixture_mm, EMPTY).files["plan.json"])
    assert plan["entries"] == []


def test_unknown_export_kind(fixture_mm, fixture_snapshot):
    with pytest.raises(UnsupportedExportError):
        generate_export("slides", fixture_snapshot, fixture_mm, EMPTY)


def test_manifest_records_profile(fixture_mm, fixture_snapshot):
    bundle = generate_export("project-plan", fixture_snapshot, fixture_mm, MAINT)
    assert bundle.manifest["profile"] == {"projectType": "maint"}
    assert bundle.manifest["variant"] == "base"
    assert bundle.manifest["version"] == "1.0"


def test_archive_layout_and_determinism(fixture_mm, fixture_snapshot):
    bundle_a = generate_process_doc(fixture_snapshot, fixture_mm, EMPTY)
    bundle_b = generate_process_doc(fixture_snapshot, fixture_mm, EMPTY)
    names = archive_names(build_archive(bundle_a))
    assert names == sorted(names)
    assert "manifest.json" in names
    # bundle payloads are deterministic; only the manifest timestamp varies
    assert bundle_a.files == bundle_b.files
    bundle_b.manifest["generated"] = bundle_a.manifest["generated"]
    assert build_archive(bundle_a) == build_archive(bundle_b)


def test_archive_entries_have_fixed_timestamps(fixture_mm, fixture_snapshot):
    payload = build_archive(generate_project_plan(fixture_snapshot, fixture_mm, EMPTY))
    with zipfile.ZipFile(io.BytesIO(payload)) as z:
        for info in z.infolist():
            assert info.date_time == (2020, 1, 1, 0, 0, 0)
