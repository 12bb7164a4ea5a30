"""Canonical JSON form of parsed descriptions (used by ``validate --dump``)."""

from __future__ import annotations

import dataclasses
import enum
import json

from .jsonld import ThingDescription
from .sawsdl import CloudServiceDescription


def _plain(value):
    if isinstance(value, enum.Enum):
        return value.value
    if dataclasses.is_dataclass(value):
        return {f.name: _plain(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def description_to_dict(d: ThingDescription | CloudServiceDescription) -> dict:
    out = {"kind": "thing" if isinstance(d, ThingDescription) else "cloud_service"}
    out.update(_plain(d))
    return out


def dump_description(d: ThingDescription | CloudServiceDescription) -> str:
    return json.dumps(description_to_dict(d), indent=2, ensure_ascii=False)
