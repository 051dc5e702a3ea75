"""Process models as a service: derived browsing API, live tailoring, exports."""

from .errors import ProclineError
from .metamodel import (
    Association,
    AttributeDef,
    ElementType,
    Metamodel,
    RouteTable,
    derive_route_table,
    parse_metamodel,
    validate_conventions,
)
from .store import ModelSnapshot, ModelStore, ingest_model, serialize_model
from .tailoring import TailoringProfile, is_applicable, parse_profile

__version__ = "0.1.0"

__all__ = [
    "Association",
    "AttributeDef",
    "ElementType",
    "Metamodel",
    "ModelSnapshot",
    "ModelStore",
    "ProclineError",
    "RouteTable",
    "TailoringProfile",
    "derive_route_table",
    "ingest_model",
    "is_applicable",
    "parse_metamodel",
    "parse_profile",
    "serialize_model",
    "validate_conventions",
    "__version__",
]
