"""Compile thing and cloud descriptions into ground planner atoms."""

from __future__ import annotations

import enum
from typing import Iterable, Sequence

from .shop_syntax import PAtom, Problem
from .symbols import SymbolError, normalize_symbol, thing_symbol
from .thing_model import CloudServiceDescription, Direction, ResourceKind, ThingDescription

__all__ = [
    "AtomizationMode",
    "SymbolError",
    "atomize_cloud",
    "atomize_thing",
    "build_problem",
    "normalize_symbol",
    "thing_symbol",
]


class AtomizationMode(enum.Enum):
    GENERAL = "general"
    # Reproduces the reference problem file, which lists only Output values.
    PAPER_COMPAT = "paper-compat"


def _concept_symbol(ref: str) -> str:
    ref = ref.strip().strip("<>")
    for sep in ("#", "/", ":", "."):
        if sep in ref:
            ref = ref.rsplit(sep, 1)[1]
    return normalize_symbol(ref)


def atomize_thing(d: ThingDescription, mode: AtomizationMode = AtomizationMode.GENERAL) -> list[PAtom]:
    tid = thing_symbol(d.thing_id)
    atoms = [PAtom("SemanticWebThing", (tid,))]
    # free-text fields left empty in the annotation produce no atom
    if d.name.strip():
        atoms.append(PAtom("thingName", (tid, normalize_symbol(d.name))))
    if d.description.strip():
        atoms.append(PAtom("thingDescription", (tid, normalize_symbol(d.description))))
    for res in d.resources:
        kind = res.kind.value
        rname = normalize_symbol(res.name)
        atoms.append(PAtom("hasResources", (tid, kind, rname)))
        if res.description.strip():
            atoms.append(PAtom("Description", (kind, rname, normalize_symbol(res.description))))
        io = res.io
        if io is None:
            continue
        if mode is AtomizationMode.PAPER_COMPAT and res.kind is ResourceKind.ACTUATOR:
            continue
        stem = "Output" if io.direction is Direction.OUTPUT else "Input"
        atoms.append(PAtom(f"{stem}Name", (kind, rname, normalize_symbol(io.name))))
        # value descriptions are lower-cased ("temperature_in_celsius_degree")
        if io.description.strip():
            atoms.append(PAtom(f"{stem}Description", (kind, rname, normalize_symbol(io.description.lower()))))
        atoms.append(PAtom(f"{stem}Unit", (kind, rname, normalize_symbol(io.unit))))
    for name, _ in d.protocols:
        atoms.append(PAtom("supportsProtocol", (tid, normalize_symbol(name))))
    for name, _ in d.security_problems:
        atoms.append(PAtom("hasSecurityProblem", (tid, normalize_symbol(name))))
    return atoms


def atomize_cloud(c: CloudServiceDescription) -> list[PAtom]:
    sid = normalize_symbol(c.service_id)
    atoms = [PAtom("CloudService", (sid,)), PAtom("serviceName", (sid, normalize_symbol(c.name)))]
    for op in c.operations:
        op_sym = normalize_symbol(op.name)
        atoms.append(PAtom("hasOperation", (sid, op_sym)))
        if op.model_reference:
            atoms.append(PAtom("modelReference", (op_sym, _concept_symbol(op.model_reference))))
    return atoms


def build_problem(
    name: str,
    domain_name: str,
    things: Iterable[ThingDescription] = (),
    clouds: Iterable[CloudServiceDescription] = (),
    tasks: Sequence[PAtom] = (),
    mode: AtomizationMode = AtomizationMode.GENERAL,
) -> Problem:
    """Assemble a problem: thing atoms, then cloud atoms, in the given order."""
    state: list[PAtom] = []
    for thing in things:
        state.extend(atomize_thing(thing, mode))
    for cloud in clouds:
        state.extend(atomize_cloud(cloud))
    return Problem(name, domain_name, tuple(state), tuple(tasks))
