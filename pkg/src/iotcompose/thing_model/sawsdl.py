"""SAWSDL subset: portType operations with model references.

Elements and attributes are matched by local name, so the ``wsdl:``,
``sawsdl:`` and ``xsd:`` prefixes are whatever the document binds them to.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass

from ..vocab import TermKind, Vocabulary, classify_term

_COMPACT_OR_IRI = re.compile(r"^(?:[A-Za-z][\w.+-]*:\S+|<\S+>|[A-Za-z_][\w-]*[.:][\w-]+)$")


class SawsdlError(ValueError):
    pass


@dataclass(frozen=True)
class CloudOperation:
    name: str
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    model_reference: str = ""


@dataclass(frozen=True)
class CloudServiceDescription:
    service_id: str
    name: str
    operations: tuple[CloudOperation, ...] = ()


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1].split(":")[-1]


def _attr(elem: ET.Element, local_name: str) -> str | None:
    for key, value in elem.attrib.items():
        if _local(key) == local_name:
            return value
    return None


def _children(elem: ET.Element, local_name: str) -> list[ET.Element]:
    return [c for c in elem if isinstance(c.tag, str) and _local(c.tag) == local_name]


def parse_sawsdl(text: str | bytes) -> CloudServiceDescription:
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        line, col = exc.position
        raise SawsdlError(f"XML syntax error at line {line} column {col}: {exc}") from None
    if _local(root.tag) != "definitions":
        raise SawsdlError(f"root element is {_local(root.tag)!r}, expected 'definitions'")

    service_id = (_attr(root, "name") or "").strip()
    if not service_id:
        raise SawsdlError("definitions element has no name")
    docs = _children(root, "documentation")
    name = " ".join((docs[0].text or "").split()) if docs else ""

    messages: dict[str, tuple[str, ...]] = {}
    for msg in _children(root, "message"):
        msg_name = _attr(msg, "name")
        if msg_name:
            messages[msg_name] = tuple(
                p for p in (_attr(part, "name") for part in _children(msg, "part")) if p
            )

    def parts_of(op: ET.Element, direction: str) -> tuple[str, ...]:
        refs = _children(op, direction)
        if not refs:
            return ()
        ref = _attr(refs[0], "message") or ""
        key = ref.split(":")[-1]
        if key not in messages:
            raise SawsdlError(f"operation {_attr(op, 'name')!r} references unknown message {ref!r}")
        return messages[key]

    port_types = _children(root, "portType")
    if not port_types:
        raise SawsdlError("no portType found")
    operations: list[CloudOperation] = []
    seen: set[str] = set()
    for port_type in port_types:
        for op in _children(port_type, "operation"):
            op_name = (_attr(op, "name") or "").strip()
            if not op_name:
                raise SawsdlError("operation without a name")
            if op_name in seen:
                raise SawsdlError(f"duplicate operation {op_name!r}")
            seen.add(op_name)
            ref = (_attr(op, "modelReference") or "").strip()
            # modelReference is a list of URIs; the first one is the concept
            ref = ref.split()[0] if ref else ""
            if ref and not _COMPACT_OR_IRI.match(ref):
                raise SawsdlError(f"operation {op_name!r}: malformed modelReference {ref!r}")
            operations.append(
                CloudOperation(op_name, parts_of(op, "input"), parts_of(op, "output"), ref)
            )
    if not operations:
        raise SawsdlError("no operations")
    return CloudServiceDescription(service_id, name or service_id, tuple(operations))


def validate_cloud(c: CloudServiceDescription, v: Vocabulary) -> list[str]:
    """Diagnostics for model references the vocabulary does not know."""
    diags = []
    for op in c.operations:
        if op.model_reference and classify_term(v, op.model_reference) is TermKind.UNKNOWN:
            diags.append(f"operation {op.name!r}: unknown model reference {op.model_reference!r}")
    return diags
