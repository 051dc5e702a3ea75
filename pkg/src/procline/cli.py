"""Command-line operator tooling.

Subcommands: validate, ingest, serve, openapi, export. Exit codes: 0 success,
1 validation findings or model errors, 2 usage errors (argparse), 3 I/O
errors. Exports and OpenAPI documents are produced by the same code paths the
HTTP service uses, so offline output matches the online service byte for byte
apart from the export manifest timestamp.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ServiceConfig, build_core, load_config
from .errors import ConfigError, ProclineError
from .exports import EXPORT_KINDS, build_archive, generate_export
from .metamodel import derive_route_table, parse_metamodel, validate_conventions
from .openapi import generate_openapi, openapi_json, openapi_yaml
from .store import ingest_model, serialize_model
from .tailoring import TailoringProfile, parse_profile

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _read_bytes(path: Path) -> bytes:
    return Path(path).read_bytes()


def _read_text(path: Path) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_metamodel(path: Path):
    mm = parse_metamodel(_read_text(path))
    report = validate_conventions(mm)
    if not report.ok:
        for finding in report.findings:
            print(f"{finding.rule_id} at {finding.location}: {finding.message}", file=sys.stderr)
        raise ProclineError("metamodel violates conventions", code="conventions")
    return mm


def _load_snapshot(args: argparse.Namespace, mm):
    return ingest_model(
        mm,
        _read_bytes(args.model),
        variant=getattr(args, "variant", None),
        version=getattr(args, "version", None),
        asset_base=Path(args.model).parent,
    )


def _load_profile(args: argparse.Namespace, snapshot) -> TailoringProfile:
    if getattr(args, "profile", None) is None:
        return TailoringProfile.empty()
    return parse_profile(_read_bytes(args.profile), snapshot)


def _cmd_validate(args: argparse.Namespace) -> int:
    mm = parse_metamodel(_read_text(args.metamodel))
    report = validate_conventions(mm)
    for finding in report.findings:
        print(f"{finding.rule_id} at {finding.location}: {finding.message}")
    if not report.ok:
        return EXIT_FINDINGS
    if args.model is not None:
        snapshot = ingest_model(mm, _read_bytes(args.model), asset_base=Path(args.model).parent)
        print(
            f"model ok: {len(snapshot.elements)} elements, "
            f"{len(snapshot.characteristics)} characteristics"
        )
    print("ok")
    return EXIT_OK


def _cmd_ingest(args: argparse.Namespace) -> int:
    mm = _load_metamodel(args.metamodel)
    snapshot = _load_snapshot(args, mm)
    Path(args.out).write_bytes(serialize_model(snapshot))
    print(f"wrote {args.out} ({snapshot.variant}/{snapshot.version})")
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    if args.config is not None:
        config = load_config(args.config)
        if args.port is not None:
            config.port = args.port
    else:
        if args.metamodel is None or not args.model:
            raise ConfigError("serve needs either --config or --metamodel plus --model")
        config = ServiceConfig(
            metamodel=Path(args.metamodel),
            models=tuple(Path(m) for m in args.model),
            default_variant=args.default_variant,
            host=args.host,
            port=args.port if args.port is not None else 8080,
        )
    serve(config)
    return EXIT_OK


def _cmd_openapi(args: argparse.Namespace) -> int:
    mm = _load_metamodel(args.metamodel)
    routes = derive_route_table(mm)
    characteristics = ()
    if args.model is not None:
        characteristics = _load_snapshot(args, mm).characteristics
    document = generate_openapi(mm, routes, characteristics)
    out = Path(args.out)
    payload = openapi_json(document) if out.suffix == ".json" else openapi_yaml(document)
    out.write_bytes(payload)
    print(f"wrote {out} ({len(document['paths'])} paths)")
    return EXIT_OK


def _cmd_export(args: argparse.Namespace) -> int:
    mm = _load_metamodel(args.metamodel)
    snapshot = _load_snapshot(args, mm)
    profile = _load_profile(args, snapshot)
    bundle = generate_export(args.kind, snapshot, mm, profile)
    Path(args.out).write_bytes(build_archive(bundle))
    print(f"wrote {args.out} ({len(bundle.files)} files)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="procline",
        description="Process model service tooling: validate, ingest, serve, export.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_validate = sub.add_parser("validate", help="check a metamodel (and optionally a model)")
    p_validate.add_argument("--metamodel", required=True, type=Path)
    p_validate.add_argument("--model", type=Path)
    p_validate.set_defaults(handler=_cmd_validate)

    p_ingest = sub.add_parser("ingest", help="validate a model and write the snapshot file")
    p_ingest.add_argument("--metamodel", required=True, type=Path)
    p_ingest.add_argument("--model", required=True, type=Path)
    p_ingest.add_argument("--variant")
    p_ingest.add_argument("--version")
    p_ingest.add_argument("--out", required=True, type=Path)
    p_ingest.set_defaults(handler=_cmd_ingest)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--config", type=Path)
    p_serve.add_argument("--metamodel", type=Path)
    p_serve.add_argument("--model", action="append", default=[], type=Path)
    p_serve.add_argument("--default-variant", dest="default_variant")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int)
    p_serve.set_defaults(handler=_cmd_serve)

    p_openapi = sub.add_parser("openapi", help="write the OpenAPI document")
    p_openapi.add_argument("--metamodel", required=True, type=Path)
    p_openapi.add_argument("--model", type=Path)
    p_openapi.add_argument("--variant")
    p_openapi.add_argument("--version")
    p_openapi.add_argument("--out", required=True, type=Path)
    p_openapi.set_defaults(handler=_cmd_openapi)

    p_export = sub.add_parser("export", help="write an artifact bundle for a profile")
    p_export.add_argument("kind", choices=EXPORT_KINDS)
    p_export.add_argument("--metamodel", required=True, type=Path)
    p_export.add_argument("--model", required=True, type=Path)
    p_export.add_argument("--variant")
    p_export.add_argument("--version")
    p_export.add_argument("--profile", type=Path)
    p_export.add_argument("--out", required=True, type=Path)
    p_export.set_defaults(handler=_cmd_export)

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ProclineError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return EXIT_FINDINGS


def entrypoint() -> None:
    sys.exit(run())


if __name__ == "__main__":
    entrypoint()
