"""Error types shared across the package.

Every error carries a machine-readable ``code``; errors that can surface over
HTTP also carry the ``status`` the service answers with.
"""

from __future__ import annotations


class ProclineError(Exception):
    """Base class for all errors raised by this package."""

    status: int = 500
    code: str = "internal"

    def __init__(self, message: str, *, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code

    @property
    def message(self) -> str:
        return str(self)


class MetamodelSyntaxError(ProclineError):
    """Malformed metamodel description; reports the 1-based source line."""

    status = 400
    code = "metamodel-syntax"

    def __init__(self, message: str, *, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MetamodelError(ProclineError):
    """A structurally invalid metamodel (duplicate names, dangling references)."""

    status = 400
    code = "metamodel-invalid"


class ConventionsError(ProclineError):
    """Route derivation was attempted on a metamodel with open findings."""

    status = 400
    code = "metamodel-conventions"


class RouteCollisionError(ProclineError):
    """Two derived routes ended up with the same path pattern."""

    status = 400
    code = "route-collision"


class IngestError(ProclineError):
    """Instance model rejected during ingest.

    ``code`` distinguishes the cases: ``schema-violation``, ``duplicate-id``,
    ``dangling-reference``, ``unknown-characteristic``, ``unknown-value``.
    """

    status = 400
    code = "schema-violation"


class TailoringError(ProclineError):
    """Bad tailoring parameter (``unknown-characteristic`` or ``unknown-value``)."""

    status = 400
    code = "unknown-characteristic"


class UnsupportedExportError(ProclineError):
    """The metamodel lacks the role a requested export needs."""

    status = 400
    code = "unsupported-export"


class ConfigError(ProclineError):
    """Invalid service configuration."""

    status = 500
    code = "config"


class NotFoundError(ProclineError):
    status = 404
    code = "not-found"


class UnknownVariantError(NotFoundError):
    code = "unknown-variant"


class UnknownVersionError(NotFoundError):
    code = "unknown-version"


class UnknownTypeError(NotFoundError):
    code = "unknown-type"


class UnknownElementError(NotFoundError):
    code = "unknown-id"


class UnknownAssociationError(NotFoundError):
    code = "unknown-association"


class UnknownAssetError(NotFoundError):
    code = "unknown-asset"


class UnknownProfileError(NotFoundError):
    code = "unknown-profile"


class UnknownRouteError(NotFoundError):
    code = "unknown-route"


class FilteredElementError(NotFoundError):
    """The element exists but is excluded by the active tailoring profile.

    Deliberately distinct from ``unknown-id`` so clients can explain why
    content is absent instead of pretending it does not exist.
    """

    code = "filtered"
