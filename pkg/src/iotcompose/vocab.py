"""Minimal ontology vocabulary: prefixes, classes, properties and subclass edges.

The on-disk format is line based, one statement per line::

    prefix myont <http://example.org/onto#>
    myont:Sensor class
    myont:hasResources property
    myont:Sensor subClassOf myont:PhysicalObject

``#`` starts a comment. Terms are compact (``myont:Sensor``) or full IRIs in
angle brackets. The prefix named ``:`` is the default namespace used for bare
terms such as ``thingId``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping

DEFAULT_PREFIX = ""


class VocabularyError(ValueError):
    """Raised for malformed vocabulary files."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TermKind(enum.Enum):
    CLASS = "Class"
    PROPERTY = "Property"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Vocabulary:
    prefix_map: Mapping[str, str] = field(default_factory=dict)
    classes: frozenset[str] = frozenset()
    properties: frozenset[str] = frozenset()
    subclass_edges: frozenset[tuple[str, str]] = frozenset()

    def expand(self, term: str, context: Mapping[str, str] | None = None) -> str | None:
        """Expand a compact or bracketed term to a full IRI.

        ``context`` prefixes (e.g. from a JSON-LD ``@context``) take priority over
        the vocabulary's own. Returns None when no prefix applies.
        """
        return expand_term(term, self.prefix_map, context)

    def superclasses(self, iri: str) -> set[str]:
        """Reflexive-transitive superclasses of ``iri``."""
        parents: dict[str, list[str]] = {}
        for child, parent in self.subclass_edges:
            parents.setdefault(child, []).append(parent)
        seen = {iri}
        stack = [iri]
        while stack:
            for parent in parents.get(stack.pop(), ()):
                if parent not in seen:
                    seen.add(parent)
                    stack.append(parent)
        return seen


def _is_full_iri(term: str) -> bool:
    return "://" in term or term.startswith("urn:")


def expand_term(
    term: str,
    prefix_map: Mapping[str, str],
    context: Mapping[str, str] | None = None,
) -> str | None:
    term = term.strip()
    if not term:
        return None
    if term.startswith("<") and term.endswith(">"):
        return term[1:-1]
    if _is_full_iri(term):
        return term
    lookups = [m for m in (context, prefix_map) if m]
    # ':' is the standard compact-IRI separator, '.' is tolerated for the
    # ``myont.SemanticWebThing`` spelling used in the annotation files.
    for sep in (":", "."):
        prefix, found, local = term.partition(sep)
        if not found or not local:
            continue
        for table in lookups:
            if prefix in table:
                return table[prefix] + local
    if ":" not in term and "." not in term:
        for table in lookups:
            if DEFAULT_PREFIX in table:
                return table[DEFAULT_PREFIX] + term
    return None


def _strip_iri(token: str) -> str:
    if token.startswith("<") and token.endswith(">"):
        return token[1:-1]
    return token


def load_vocabulary(text: str) -> Vocabulary:
    prefix_map: dict[str, str] = {}
    classes: set[str] = set()
    properties: set[str] = set()
    edges: set[tuple[str, str]] = set()

    def resolve(token: str, lineno: int) -> str:
        iri = expand_term(token, prefix_map)
        if iri is None:
            raise VocabularyError(f"cannot expand term {token!r}", lineno)
        return iri

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        parts = line.split()
        if parts[0] == "prefix":
            if len(parts) != 3:
                raise VocabularyError("expected 'prefix <name> <iri-base>'", lineno)
            name = parts[1]
            name = DEFAULT_PREFIX if name == ":" else name.rstrip(":")
            base = _strip_iri(parts[2])
            if prefix_map.get(name, base) != base:
                raise VocabularyError(f"prefix {parts[1]!r} redeclared with a different IRI", lineno)
            if name != DEFAULT_PREFIX:
                for other, other_base in prefix_map.items():
                    if other != name and other != DEFAULT_PREFIX and other_base == base:
                        raise VocabularyError(
                            f"prefixes {other!r} and {name!r} map to the same IRI", lineno
                        )
            prefix_map[name] = base
        elif len(parts) == 2 and parts[1] == "class":
            classes.add(resolve(parts[0], lineno))
        elif len(parts) == 2 and parts[1] == "property":
            properties.add(resolve(parts[0], lineno))
        elif len(parts) == 3 and parts[1] == "subClassOf":
            child, parent = resolve(parts[0], lineno), resolve(parts[2], lineno)
            classes.update((child, parent))
            edges.add((child, parent))
        else:
            raise VocabularyError(f"unrecognised statement {line!r}", lineno)

    overlap = classes & properties
    if overlap:
        raise VocabularyError(f"terms declared both class and property: {sorted(overlap)}")
    vocab = Vocabulary(
        prefix_map=dict(prefix_map),
        classes=frozenset(classes),
        properties=frozenset(properties),
        subclass_edges=frozenset(edges),
    )
    _check_acyclic(vocab)
    return vocab


def _strip_comment(raw: str) -> str:
    # '#' inside <...> belongs to the IRI
    depth = 0
    for i, ch in enumerate(raw):
        if ch == "<":
            depth += 1
        elif ch == ">":
            depth = max(0, depth - 1)
        elif ch == "#" and depth == 0:
            return raw[:i].strip()
    return raw.strip()


def _check_acyclic(vocab: Vocabulary) -> None:
    for child, parent in vocab.subclass_edges:
        if child == parent or child in vocab.superclasses(parent):
            raise VocabularyError(f"subclass cycle through {child}")


def bundled_vocabulary() -> Vocabulary:
    """The vocabulary shipped with the package."""
    text = resources.files("iotcompose.data").joinpath("vocabulary.txt").read_text("utf-8")
    return load_vocabulary(text)


def classify_term(v: Vocabulary, compact_or_full: str, context: Mapping[str, str] | None = None) -> TermKind:
    iri = v.expand(compact_or_full, context)
    if iri is None:
        return TermKind.UNKNOWN
    if iri in v.classes:
        return TermKind.CLASS
    if iri in v.properties:
        return TermKind.PROPERTY
    return TermKind.UNKNOWN


def is_subclass_of(v: Vocabulary, child: str, parent: str) -> bool:
    """Reflexive, transitive subclass test. Compact terms are expanded first."""
    child_iri = v.expand(child) or child
    parent_iri = v.expand(parent) or parent
    return parent_iri in v.superclasses(child_iri)
