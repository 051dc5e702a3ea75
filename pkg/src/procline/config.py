"""Service configuration: key=value file parsing and core assembly."""

from __future__ import annotations

import errno
from dataclasses import dataclass
from pathlib import Path

from .dispatch import ServiceCore
from .errors import ConfigError, ConventionsError
from .metamodel import derive_route_table, parse_metamodel, validate_conventions
from .store import ModelStore
from .tailoring import ProfileStore


@dataclass
class ServiceConfig:
    metamodel: Path
    models: tuple[Path, ...]
    default_variant: str | None = None
    host: str = "127.0.0.1"
    port: int = 8080


def _missing(path: Path) -> FileNotFoundError:
    return FileNotFoundError(errno.ENOENT, "no such file", str(path))


def load_config(path: Path | str) -> ServiceConfig:
    """Parse a key=value config file; relative paths resolve next to the file."""
    path = Path(path)
    if not path.is_file():
        raise _missing(path)
    base = path.parent
    values: dict[str, str] = {}
    models: list[Path] = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "model":
            models.append(base / value)
        elif key in ("metamodel", "default_variant", "host", "port"):
            if key in values:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            values[key] = value
        else:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
    if "metamodel" not in values:
        raise ConfigError(f"{path}: missing required key 'metamodel'")
    if not models:
        raise ConfigError(f"{path}: at least one 'model' entry is required")
    port = 8080
    if "port" in values:
        try:
            port = int(values["port"])
        except ValueError:
            raise ConfigError(f"{path}: port must be an integer, got {values['port']!r}")
    return ServiceConfig(
        metamodel=base / values["metamodel"],
        models=tuple(models),
        default_variant=values.get("default_variant"),
        host=values.get("host", "127.0.0.1"),
        port=port,
    )


def _read(path: Path) -> bytes:
    if not path.is_file():
        raise _missing(path)
    return path.read_bytes()


def build_core(config: ServiceConfig) -> ServiceCore:
    """Parse, validate, ingest, and wire everything into a ready ServiceCore."""
    mm = parse_metamodel(_read(config.metamodel).decode("utf-8"))
    report = validate_conventions(mm)
    if not report.ok:
        raise ConventionsError(
            "metamodel violates conventions: "
            + "; ".join(f"{f.rule_id} at {f.location}" for f in report.findings)
        )
    routes = derive_route_table(mm)

    store = ModelStore()
    for model_path in config.models:
        document = _read(model_path)
        store.ingest(mm, document, asset_base=model_path.parent)

    # a variant name equal to a type segment would make /api/{variant}/... ambiguous
    type_segments = {r.pattern.split("/")[1] for r in routes.routes}
    for variant in sorted(store.variant_names()):
        if variant in type_segments:
            raise ConfigError(
                f"variant name {variant!r} collides with a route segment; rename the variant"
            )

    variants = sorted(store.variant_names())
    default_variant = config.default_variant or (variants[0] if len(variants) == 1 else None)
    if default_variant is None:
        raise ConfigError(
            "several variants are ingested; set default_variant in the config"
        )
    if default_variant not in variants:
        raise ConfigError(f"default_variant {default_variant!r} was never ingested")

    return ServiceCore(
        mm=mm,
        routes=routes,
        store=store,
        profiles=ProfileStore(),
        default_variant=default_variant,
    )
