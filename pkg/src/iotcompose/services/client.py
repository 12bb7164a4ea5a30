"""HTTP calls, GSN-style reading ingestion and the threshold decision."""

from __future__ import annotations

import json
import urllib.error
import urllib.request
from dataclasses import dataclass
from typing import Any

from ..thing_model import (
    Direction,
    JsonNode,
    JsonNumber,
    JsonObject,
    ThingDescription,
)
from .model import EndpointDescriptor, Reading, ThresholdRule

# The @context block the annotation files carry.
ANNOTATION_CONTEXT = JsonObject((
    ("rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"),
    ("rdfs", "http://www.w3.org/2000/01/rdf-schema#"),
    ("owl", "http://www.w3.org/2002/07/owl#"),
    ("myont", "http://iot.foi.hr/ontologies/ThingAsAServiceOntology.owl#"),
))

GSN_FIELDS = ("sensor", "value", "unit", "timestamp")


class ServiceError(RuntimeError):
    """A failed service interaction. ``kind`` is one of
    ``network``, ``status``, ``payload``, ``unit``, ``shape``."""

    def __init__(self, kind: str, message: str, status: int | None = None, body: Any = None):
        self.kind = kind
        self.status = status
        self.body = body
        super().__init__(f"{kind}: {message}")


@dataclass
class HttpResponse:
    status: int
    body: Any


def _decode(raw: bytes) -> Any:
    text = raw.decode("utf-8", errors="replace")
    try:
        return json.loads(text)
    except ValueError:
        return text


def http_request(method: str, url: str, payload: Any = None, timeout: float = 5.0) -> HttpResponse:
    """Send a JSON request. Non-2xx statuses raise ``ServiceError('status')``."""
    data = None
    headers = {"Accept": "application/json"}
    if payload is not None:
        data = payload.encode("utf-8") if isinstance(payload, str) else json.dumps(payload).encode("utf-8")
        headers["Content-Type"] = "application/json"
    req = urllib.request.Request(url, data=data, method=method, headers=headers)
    try:
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            return HttpResponse(resp.status, _decode(resp.read()))
    except urllib.error.HTTPError as exc:
        body = _decode(exc.read())
        raise ServiceError("status", f"{method} {url} returned {exc.code}", exc.code, body) from None
    except (urllib.error.URLError, OSError) as exc:
        reason = getattr(exc, "reason", exc)
        raise ServiceError("network", f"{method} {url} failed: {reason}") from None


def reading_from_gsn(doc: Any) -> Reading:
    """Parse ``{"sensor", "value", "unit", "timestamp"}`` into a Reading."""
    if isinstance(doc, JsonObject):
        doc = {k: (v.value if isinstance(v, JsonNumber) else v) for k, v in doc.members}
    if not isinstance(doc, dict):
        raise ServiceError("payload", "reading must be a JSON object")
    for name in GSN_FIELDS:
        if name not in doc:
            raise ServiceError("payload", f"reading is missing field {name!r}")
    value, timestamp = doc["value"], doc["timestamp"]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ServiceError("payload", "field 'value' must be a number")
    if isinstance(timestamp, bool) or not isinstance(timestamp, int):
        raise ServiceError("payload", "field 'timestamp' must be an integer")
    if not isinstance(doc["unit"], str) or not doc["unit"]:
        raise ServiceError("payload", "field 'unit' must be a non-empty string")
    return Reading(str(doc["sensor"]), float(value), doc["unit"], timestamp)


def reading_to_gsn(r: Reading) -> JsonObject:
    return JsonObject((
        ("sensor", r.source),
        ("value", JsonNumber.of(r.value)),
        ("unit", r.unit),
        ("timestamp", JsonNumber.of(r.timestamp)),
    ))


def fetch_reading(e: EndpointDescriptor, args: dict[str, Any], timeout: float = 5.0) -> Reading:
    resp = http_request("GET", e.url(args), timeout=timeout)
    return reading_from_gsn(resp.body)


def upgrade_gsn_json(doc: JsonNode, thing: ThingDescription) -> JsonObject:
    """Turn a GSN-style reading into a JSON-LD document typed as the sensor's Output.

    The original members are kept unchanged after ``@context`` and ``@type``.
    """
    if not isinstance(doc, JsonObject):
        raise ServiceError("shape", "GSN reading must be a JSON object")
    for name in GSN_FIELDS:
        if name not in doc:
            raise ServiceError("shape", f"GSN reading is missing {name!r}")
    if not isinstance(doc.get("value"), JsonNumber):
        raise ServiceError("shape", "GSN reading value must be a number")
    sensor = doc.get("sensor")
    resource = thing.find_resource(sensor) if isinstance(sensor, str) else None
    if resource is None or resource.io is None or resource.io.direction is not Direction.OUTPUT:
        raise ServiceError("shape", f"{thing.name or thing.thing_id} has no sensor output {sensor!r}")
    members = [(k, v) for k, v in doc.members if not k.startswith("@")]
    return JsonObject((("@context", ANNOTATION_CONTEXT), ("@type", "myont.Output"), *members))


def strip_jsonld(doc: JsonObject) -> JsonObject:
    return JsonObject(tuple((k, v) for k, v in doc.members if not k.startswith("@")))


def decide_actuation(r: Reading, rule: ThresholdRule) -> float:
    """``on_value`` when strictly outside ``[low, high]``, else ``off_value``."""
    if r.unit != "celsius":
        raise ServiceError("unit", f"threshold rules are in celsius, reading is in {r.unit!r}")
    if r.value < rule.low or r.value > rule.high:
        return rule.on_value
    return rule.off_value

