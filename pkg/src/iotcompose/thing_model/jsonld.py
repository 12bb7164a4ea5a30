"""Typed thing descriptions expanded from JSON-LD annotations."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..symbols import SymbolError, normalize_symbol
from ..vocab import TermKind, Vocabulary, classify_term
from .jsontree import JsonNode, JsonNumber, JsonObject


class ThingModelError(ValueError):
    pass


class Direction(enum.Enum):
    INPUT = "Input"
    OUTPUT = "Output"


class ResourceKind(enum.Enum):
    SENSOR = "Sensor"
    ACTUATOR = "Actuator"
    PHYSICAL_OBJECT = "PhysicalObject"


@dataclass(frozen=True)
class IoValueSpec:
    direction: Direction
    name: str
    description: str
    unit: str


@dataclass(frozen=True)
class ResourceSpec:
    kind: ResourceKind
    name: str
    description: str
    io: IoValueSpec | None = None
    # the @type the resource was declared with, kept for validation
    type_term: str = ""


@dataclass(frozen=True)
class ThingDescription:
    thing_id: str
    name: str
    description: str
    resources: tuple[ResourceSpec, ...] = ()
    protocols: tuple[tuple[str, str], ...] = ()
    security_problems: tuple[tuple[str, str], ...] = ()
    type_term: str = "myont:SemanticWebThing"

    def find_resource(self, name: str) -> ResourceSpec | None:
        """Resource whose raw or normalized name equals ``name``."""
        for res in self.resources:
            if res.name == name:
                return res
        for res in self.resources:
            try:
                if normalize_symbol(res.name) == name:
                    return res
            except SymbolError:
                continue
        return None


# Ontology local names of the members we read. Keys in documents may be bare,
# ``myont.x`` or ``myont:x``; all are expanded and compared by IRI.
_NS_TERMS = (
    "thingId thingName thingDescription hasResources supportsProtocols "
    "hasSecurityProblems poName poDescription hasValues inputName "
    "inputDescription inputUnit outputName outputDescription outputUnit "
    "proName proDescription secName secDescription"
).split()


@dataclass
class _Resolver:
    vocab: Vocabulary
    context: dict[str, str] = field(default_factory=dict)

    def iri(self, term: str) -> str | None:
        return self.vocab.expand(term, self.context)

    def local(self, key: str) -> str | None:
        """Ontology local name for a member key, or None if not ours."""
        if key.startswith("@"):
            return None
        iri = self.iri(key)
        if iri is None:
            return None
        ns = self.vocab.prefix_map.get("myont") or self.vocab.prefix_map.get("")
        if ns and iri.startswith(ns) and iri[len(ns):] in _NS_TERMS:
            return iri[len(ns):]
        return None

    def members(self, obj: JsonObject) -> dict[str, list[JsonNode]]:
        grouped: dict[str, list[JsonNode]] = {}
        for key, value in obj.members:
            name = self.local(key)
            if name is not None:
                grouped.setdefault(name, []).append(value)
        return grouped

    def is_a(self, type_term: str, class_local: str) -> bool:
        iri = self.iri(type_term)
        if iri is None or classify_term(self.vocab, iri) is not TermKind.CLASS:
            return False
        target = self.vocab.expand(f"myont:{class_local}")
        return target is not None and target in self.vocab.superclasses(iri)


def _context_of(doc: JsonObject) -> dict[str, str]:
    ctx = doc.get("@context")
    if not isinstance(ctx, JsonObject):
        raise ThingModelError("document has no @context object")
    prefixes: dict[str, str] = {}
    for key, value in ctx.members:
        if isinstance(value, str):
            prefixes[key] = value
        elif isinstance(value, JsonObject) and isinstance(value.get("@id"), str):
            prefixes[key] = value.get("@id")
    return prefixes


def _literal(node: JsonNode, what: str) -> str:
    """Unwrap ``{"value": s}`` / ``{"@value": s}`` wrappers and plain scalars."""
    if isinstance(node, JsonObject):
        if len(node) != 1 or node.names()[0] not in ("value", "@value"):
            raise ThingModelError(f"malformed value wrapper for {what}: members {node.names()}")
        node = node.members[0][1]
    if isinstance(node, str):
        return node
    if isinstance(node, JsonNumber):
        return node.lexeme
    raise ThingModelError(f"{what} must be a string or number literal")


def _single(grouped: dict[str, list[JsonNode]], name: str, default: str = "") -> str:
    values = grouped.get(name)
    if not values:
        return default
    return _literal(values[-1], name)


def _objects(values: list[JsonNode], what: str) -> list[JsonObject]:
    out: list[JsonObject] = []
    for value in values:
        items = value if isinstance(value, list) else [value]
        for item in items:
            if not isinstance(item, JsonObject):
                raise ThingModelError(f"{what} entries must be objects")
            out.append(item)
    return out


def _type_of(obj: JsonObject, what: str) -> str:
    t = obj.get("@type")
    if isinstance(t, list) and t:
        t = t[0]
    if not isinstance(t, str):
        raise ThingModelError(f"{what} has no @type")
    return t.strip()


def _io_spec(obj: JsonObject, r: _Resolver) -> IoValueSpec:
    type_term = _type_of(obj, "hasValues")
    if r.is_a(type_term, "Output"):
        direction, stem = Direction.OUTPUT, "output"
    elif r.is_a(type_term, "Input"):
        direction, stem = Direction.INPUT, "input"
    else:
        raise ThingModelError(f"hasValues @type {type_term!r} is neither Input nor Output")
    grouped = r.members(obj)
    spec = IoValueSpec(
        direction=direction,
        name=_single(grouped, f"{stem}Name"),
        description=_single(grouped, f"{stem}Description"),
        unit=_single(grouped, f"{stem}Unit"),
    )
    if not spec.name or not spec.unit:
        raise ThingModelError(f"{stem} value needs a name and a unit")
    return spec


def _resource(obj: JsonObject, r: _Resolver) -> ResourceSpec:
    type_term = _type_of(obj, "hasResources entry")
    grouped = r.members(obj)
    values = _objects(grouped.get("hasValues", []), "hasValues")
    io = _io_spec(values[0], r) if values else None
    if len(values) > 1:
        raise ThingModelError("a resource carries at most one hasValues entry")

    if r.is_a(type_term, "Actuator"):
        kind = ResourceKind.ACTUATOR
    elif r.is_a(type_term, "Sensor"):
        kind = ResourceKind.SENSOR
    elif r.is_a(type_term, "PhysicalObject"):
        # a physical object producing Output values is a sensor
        if io is not None and io.direction is Direction.OUTPUT:
            kind = ResourceKind.SENSOR
        else:
            kind = ResourceKind.PHYSICAL_OBJECT
    else:
        raise ThingModelError(f"resource @type {type_term!r} is not a known resource class")

    if kind is ResourceKind.SENSOR and io is not None and io.direction is not Direction.OUTPUT:
        raise ThingModelError(f"sensor {type_term!r} declares Input values")
    if kind is ResourceKind.ACTUATOR and io is not None and io.direction is not Direction.INPUT:
        raise ThingModelError(f"actuator {type_term!r} declares Output values")
    return ResourceSpec(
        kind=kind,
        name=_single(grouped, "poName"),
        description=_single(grouped, "poDescription"),
        io=io,
        type_term=type_term,
    )


def _named_pairs(values, r: _Resolver, name_key: str, desc_key: str, what: str):
    pairs = []
    for obj in _objects(values, what):
        grouped = r.members(obj)
        name = _single(grouped, name_key)
        if not name:
            raise ThingModelError(f"{what} entry without {name_key}")
        pairs.append((name, _single(grouped, desc_key)))
    return tuple(pairs)


def expand_thing(doc: JsonNode, v: Vocabulary) -> ThingDescription:
    if not isinstance(doc, JsonObject):
        raise ThingModelError("thing annotation must be a JSON object")
    r = _Resolver(v, _context_of(doc))
    type_term = _type_of(doc, "document")
    if classify_term(v, type_term, r.context) is not TermKind.CLASS:
        raise ThingModelError(f"@type {type_term!r} is not a known class")
    if not r.is_a(type_term, "SemanticWebThing"):
        raise ThingModelError(f"@type {type_term!r} is not a SemanticWebThing")

    grouped = r.members(doc)
    thing_id = _single(grouped, "thingId")
    if not thing_id:
        raise ThingModelError("thingId is missing or empty")
    resources = tuple(
        _resource(obj, r) for obj in _objects(grouped.get("hasResources", []), "hasResources")
    )
    return ThingDescription(
        thing_id=thing_id,
        name=_single(grouped, "thingName"),
        description=_single(grouped, "thingDescription"),
        resources=resources,
        protocols=_named_pairs(
            grouped.get("supportsProtocols", []), r, "proName", "proDescription", "supportsProtocols"
        ),
        security_problems=_named_pairs(
            grouped.get("hasSecurityProblems", []), r, "secName", "secDescription", "hasSecurityProblems"
        ),
        type_term=type_term,
    )


def validate_description(d: ThingDescription, v: Vocabulary) -> list[str]:
    """Return human-readable diagnostics; an empty list means valid."""
    diags: list[str] = []
    if not d.thing_id.strip():
        diags.append("thing_id is empty")
    if classify_term(v, d.type_term) is not TermKind.CLASS:
        diags.append(f"thing type {d.type_term!r} is not a known class")

    for label, pairs in (("protocol", d.protocols), ("security problem", d.security_problems)):
        seen: set[str] = set()
        for name, _ in pairs:
            try:
                key = normalize_symbol(name)
            except SymbolError as exc:
                diags.append(f"{label} {name!r}: {exc}")
                continue
            if key in seen:
                diags.append(f"duplicate {label} {name!r}")
            seen.add(key)

    for res in d.resources:
        if res.type_term and classify_term(v, res.type_term) is not TermKind.CLASS:
            diags.append(f"resource {res.name!r} has unknown type {res.type_term!r}")
        if not res.name.strip():
            diags.append("resource without a name")
        io = res.io
        if io is None:
            continue
        if not io.name or not io.unit:
            diags.append(f"resource {res.name!r}: value spec needs name and unit")
        if res.kind is ResourceKind.SENSOR and io.direction is not Direction.OUTPUT:
            diags.append(f"sensor {res.name!r} has Input values")
        if res.kind is ResourceKind.ACTUATOR and io.direction is not Direction.INPUT:
            diags.append(f"actuator {res.name!r} has Output values")
    return diags


def document_terms(node: JsonNode) -> list[str]:
    """Every member name and ``@type`` value in a document, ``@context`` excluded."""
    terms: list[str] = []

    def walk(n: JsonNode) -> None:
        if isinstance(n, JsonObject):
            for key, value in n.members:
                if key == "@context":
                    continue
                if key == "@type":
                    types = value if isinstance(value, list) else [value]
                    terms.extend(t.strip() for t in types if isinstance(t, str))
                    continue
                if not key.startswith("@"):
                    terms.append(key)
                walk(value)
        elif isinstance(n, list):
            for item in n:
                walk(item)

    walk(node)
    return terms
