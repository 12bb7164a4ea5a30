"""Turning free-text annotation values into planner symbols."""

from __future__ import annotations

import re

_WHITESPACE = re.compile(r"\s+")
_RESERVED = re.compile(r"[();]")


class SymbolError(ValueError):
    pass


def normalize_symbol(s: str) -> str:
    """Map a free-text value to a planner symbol.

    Whitespace runs become ``_``, parentheses and ``;`` become ``_``, and
    leading purely numeric words are dropped when other words follow them
    (``"02 long LED"`` -> ``long_LED``).
    """
    words = _WHITESPACE.split(s.strip())
    while len(words) > 1 and words[0].isdigit():
        words.pop(0)
    symbol = _RESERVED.sub("_", "_".join(w for w in words if w))
    if symbol.startswith("?"):
        symbol = "_" + symbol[1:]
    if not symbol:
        raise SymbolError(f"{s!r} normalizes to an empty symbol")
    return symbol


def thing_symbol(thing_id: str) -> str:
    return f"SemanticWebThing_{normalize_symbol(thing_id)}"
