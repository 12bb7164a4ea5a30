"""Unification, world states and conjunctive queries with axioms."""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Mapping, Sequence

from ..shop_syntax import AxiomDef, OperatorDef, PAtom, is_variable

Substitution = Mapping[str, str]


class PlanningError(RuntimeError):
    pass


def walk(term: str, s: Substitution) -> str:
    while is_variable(term) and term in s:
        term = s[term]
    return term


def unify(a: PAtom, b: PAtom, s: Substitution | None = None) -> dict[str, str] | None:
    """Most general unifier of ``a`` and ``b`` extending ``s``, or None."""
    if a.head != b.head or len(a.args) != len(b.args):
        return None
    out = dict(s or {})
    for x, y in zip(a.args, b.args):
        x, y = walk(x, out), walk(y, out)
        if x == y:
            continue
        if is_variable(x):
            out[x] = y
        elif is_variable(y):
            out[y] = x
        else:
            return None
    return out


def substitute(atom: PAtom, s: Substitution) -> PAtom:
    if not s:
        return atom
    return PAtom(atom.head, tuple(walk(t, s) for t in atom.args))


def resolve(s: Substitution) -> dict[str, str]:
    """Fully dereferenced copy: every variable maps straight to its final term."""
    return {var: walk(var, s) for var in s}


class State:
    """A set of ground atoms indexed by head symbol, iterated in insertion order."""

    __slots__ = ("_index", "_size")

    def __init__(self, atoms: Iterable[PAtom] = ()):
        self._index: dict[str, dict[PAtom, None]] = {}
        self._size = 0
        for atom in atoms:
            self._add(atom)

    def _add(self, atom: PAtom) -> None:
        if not atom.is_ground:
            raise PlanningError(f"state atoms must be ground: {atom}")
        bucket = self._index.setdefault(atom.head, {})
        if atom not in bucket:
            bucket[atom] = None
            self._size += 1

    def _discard(self, atom: PAtom) -> None:
        bucket = self._index.get(atom.head)
        if bucket is not None and atom in bucket:
            del bucket[atom]
            self._size -= 1

    def with_head(self, head: str) -> Iterable[PAtom]:
        return self._index.get(head, {}).keys()

    def __contains__(self, atom: object) -> bool:
        return isinstance(atom, PAtom) and atom in self._index.get(atom.head, ())

    def __iter__(self) -> Iterator[PAtom]:
        for bucket in self._index.values():
            yield from bucket

    def __len__(self) -> int:
        return self._size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, State):
            return NotImplemented
        return len(self) == len(other) and all(a in other for a in self)

    def __repr__(self) -> str:
        return f"State({list(self)!r})"

    def updated(self, deletes: Iterable[PAtom], adds: Iterable[PAtom]) -> "State":
        new = State.__new__(State)
        new._index = {head: dict(bucket) for head, bucket in self._index.items()}
        new._size = self._size
        for atom in deletes:
            new._discard(atom)
        for atom in adds:
            new._add(atom)
        return new


_fresh = itertools.count()


def _rename_axiom(axiom: AxiomDef) -> AxiomDef:
    suffix = f"~{next(_fresh)}"

    def ren(atom: PAtom) -> PAtom:
        return PAtom(atom.head, tuple(t + suffix if is_variable(t) else t for t in atom.args))

    return AxiomDef(ren(axiom.head), tuple(tuple(ren(a) for a in tail) for tail in axiom.tails))


class SubstitutionStream:
    """Lazy stream of answers; ``truncated`` is set once the axiom depth bound bites."""

    def __init__(self, state: State, axioms: Sequence[AxiomDef], goals: Sequence[PAtom],
                 s: Substitution, max_depth: int):
        self.truncated = False
        self._state = state
        self._axioms = axioms
        self._goals = tuple(goals)
        self._s = dict(s)
        self._max_depth = max_depth
        self._keep = set(self._s) | {v for g in self._goals for v in g.variables}

    def __iter__(self) -> Iterator[dict[str, str]]:
        seen: set[tuple[tuple[str, str], ...]] = set()
        for answer in self._solve(self._goals, self._s, 0):
            projected = {v: walk(v, answer) for v in self._keep if walk(v, answer) != v}
            key = tuple(sorted(projected.items()))
            if key not in seen:
                seen.add(key)
                yield projected

    def _solve(self, goals, s, depth):
        if not goals:
            yield s
            return
        for s1 in self._prove(goals[0], s, depth):
            yield from self._solve(goals[1:], s1, depth)

    def _prove(self, goal: PAtom, s, depth):
        goal = substitute(goal, s)
        for fact in self._state.with_head(goal.head):
            s1 = unify(goal, fact, s)
            if s1 is not None:
                yield s1
        for axiom in self._axioms:
            if axiom.head.head != goal.head or len(axiom.head.args) != len(goal.args):
                continue
            if depth >= self._max_depth:
                self.truncated = True
                continue
            renamed = _rename_axiom(axiom)
            s1 = unify(goal, renamed.head, s)
            if s1 is None:
                continue
            for tail in renamed.tails:
                yield from self._solve(tail, s1, depth + 1)


def satisfy(
    state: State,
    axioms: Sequence[AxiomDef],
    conjunction: Sequence[PAtom],
    s: Substitution | None = None,
    max_depth: int = 64,
) -> SubstitutionStream:
    """Every substitution extending ``s`` under which all conjuncts hold.

    Facts are tried in state order before axioms (in domain order); answers
    are deduplicated on the variables of ``s`` and ``conjunction``.
    """
    return SubstitutionStream(state, axioms, conjunction, s or {}, max_depth)


def apply_operator(state: State, op: OperatorDef, s: Substitution) -> State:
    """Deletes first, then adds; deleting an absent atom is a no-op."""
    deletes = [substitute(a, s) for a in op.delete_list]
    adds = [substitute(a, s) for a in op.add_list]
    for atom in deletes + adds:
        if not atom.is_ground:
            raise PlanningError(f"{op.head.head}: effect {atom} is not ground under {dict(s)}")
    return state.updated(deletes, adds)
