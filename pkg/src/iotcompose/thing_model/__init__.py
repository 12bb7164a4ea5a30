"""Parsing of JSON-LD thing annotations and SAWSDL cloud descriptors."""

from .jsonld import (
    Direction,
    document_terms,
    IoValueSpec,
    ResourceKind,
    ResourceSpec,
    ThingDescription,
    ThingModelError,
    expand_thing,
    validate_description,
)
from .jsontree import (
    JsonNode,
    JsonNumber,
    JsonObject,
    JsonSyntaxError,
    from_python,
    parse_json_preserving,
    serialize,
    to_python,
)
from .sawsdl import CloudOperation, CloudServiceDescription, SawsdlError, parse_sawsdl, validate_cloud
from .dump import description_to_dict, dump_description

__all__ = [
    "CloudOperation",
    "CloudServiceDescription",
    "Direction",
    "IoValueSpec",
    "JsonNode",
    "JsonNumber",
    "JsonObject",
    "JsonSyntaxError",
    "ResourceKind",
    "ResourceSpec",
    "SawsdlError",
    "ThingDescription",
    "ThingModelError",
    "document_terms",
    "description_to_dict",
    "dump_description",
    "expand_thing",
    "from_python",
    "parse_json_preserving",
    "parse_sawsdl",
    "serialize",
    "to_python",
    "validate_cloud",
    "validate_description",
]
