"""JSON values that keep duplicate object members and number lexemes.

Objects become :class:`JsonObject` (ordered ``(name, value)`` pairs, duplicates
kept), numbers become :class:`JsonNumber` (original lexeme), arrays are plain
lists and the remaining scalars are ``str``/``bool``/``None``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Union


class JsonSyntaxError(ValueError):
    def __init__(self, msg: str, offset: int, line: int, column: int):
        self.offset = offset
        self.line = line
        self.column = column
        super().__init__(f"{msg} at line {line} column {column} (offset {offset})")


@dataclass(frozen=True)
class JsonNumber:
    lexeme: str

    @property
    def value(self) -> int | float:
        try:
            return int(self.lexeme)
        except ValueError:
            return float(self.lexeme)

    @classmethod
    def of(cls, number: int | float) -> "JsonNumber":
        return cls(json.dumps(number))


@dataclass(frozen=True)
class JsonObject:
    members: tuple[tuple[str, "JsonNode"], ...] = ()

    def get(self, name: str, default=None):
        """First member named ``name``."""
        for key, value in self.members:
            if key == name:
                return value
        return default

    def get_all(self, name: str) -> list["JsonNode"]:
        return [value for key, value in self.members if key == name]

    def names(self) -> list[str]:
        return [key for key, _ in self.members]

    def __contains__(self, name: object) -> bool:
        return any(key == name for key, _ in self.members)

    def __iter__(self) -> Iterator[tuple[str, "JsonNode"]]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)


JsonNode = Union[None, bool, str, JsonNumber, list, JsonObject]


def _reject_constant(name: str):
    raise ValueError(f"{name} is not valid JSON")


def parse_json_preserving(text: str | bytes) -> JsonNode:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        return json.loads(
            text,
            object_pairs_hook=lambda pairs: JsonObject(tuple(pairs)),
            parse_int=JsonNumber,
            parse_float=JsonNumber,
            parse_constant=_reject_constant,
        )
    except json.JSONDecodeError as exc:
        raise JsonSyntaxError(exc.msg, exc.pos, exc.lineno, exc.colno) from None
    except ValueError as exc:
        raise JsonSyntaxError(str(exc), 0, 1, 1) from None


def serialize(node: JsonNode, indent: int | None = None) -> str:
    """Serialize to JSON text; member order and duplicates survive."""
    parts: list[str] = []
    _write(node, parts, indent, 0)
    return "".join(parts)


def _write(node: JsonNode, out: list[str], indent: int | None, level: int) -> None:
    if isinstance(node, JsonObject):
        items = [(json.dumps(k, ensure_ascii=False) + ": ", v) for k, v in node.members]
        _write_container("{", "}", items, out, indent, level)
    elif isinstance(node, list):
        _write_container("[", "]", [("", v) for v in node], out, indent, level)
    elif isinstance(node, JsonNumber):
        out.append(node.lexeme)
    elif node is None or isinstance(node, (bool, str)):
        out.append(json.dumps(node, ensure_ascii=False))
    else:
        raise TypeError(f"not a JSON node: {type(node).__name__}")


def _write_container(open_, close, items, out, indent, level):
    if not items:
        out.append(open_ + close)
        return
    out.append(open_)
    for i, (prefix, value) in enumerate(items):
        if i:
            out.append(",")
        if indent is not None:
            out.append("\n" + " " * (indent * (level + 1)))
        out.append(prefix)
        _write(value, out, indent, level + 1)
    if indent is not None:
        out.append("\n" + " " * (indent * level))
    out.append(close)


def from_python(value) -> JsonNode:
    """Convert plain Python data (dicts, lists, numbers) to a JsonNode."""
    if isinstance(value, JsonObject | JsonNumber):
        return value
    if isinstance(value, dict):
        return JsonObject(tuple((str(k), from_python(v)) for k, v in value.items()))
    if isinstance(value, (list, tuple)):
        return [from_python(v) for v in value]
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, float)):
        return JsonNumber.of(value)
    raise TypeError(f"cannot convert {type(value).__name__} to JSON")


def to_python(node: JsonNode):
    """Lossy conversion to plain Python; later duplicate members win."""
    if isinstance(node, JsonObject):
        return {k: to_python(v) for k, v in node.members}
    if isinstance(node, list):
        return [to_python(v) for v in node]
    if isinstance(node, JsonNumber):
        return node.value
    return node
