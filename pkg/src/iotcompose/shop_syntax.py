"""Reading and writing JSHOP2-style s-expression files.

Symbols are plain strings; a term is a variable when it starts with ``?``.
Nested lists of strings are the raw s-expression form handed from the
reader to :func:`parse_domain` / :func:`parse_problem`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, Union

SExpr = Union[str, list["SExpr"]]


class ShopSyntaxError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


def is_variable(term: str) -> bool:
    return term.startswith("?")


# ---------------------------------------------------------------------------
# reader

@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int


_TOKEN = re.compile(r"\s+|;[^\n]*|[()]|[^\s();]+")


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, line_start = 1, 0
    for m in _TOKEN.finditer(text):
        chunk = m.group()
        if not chunk[0].isspace() and chunk[0] != ";":
            tokens.append(_Token(chunk, line, m.start() - line_start + 1))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + chunk.rindex("\n") + 1
    return tokens


def _blame_line(text: str, tokens: list[_Token], detected_line: int) -> int:
    """Best guess for the line holding a paren imbalance.

    Assumes indentation of two spaces per nesting level (as produced by the
    printers here): the first line whose actual starting depth disagrees with
    its indentation points at the line before it, or at itself when its own
    leading closers account for the difference.
    """
    lines = text.split("\n")
    start_depth: dict[int, int] = {}
    depth = 0
    for tok in tokens:
        start_depth.setdefault(tok.line, depth)
        if tok.text == "(":
            depth += 1
        elif tok.text == ")":
            depth -= 1
    previous: int | None = None
    for lineno in sorted(start_depth):
        if lineno > detected_line:
            break
        raw = lines[lineno - 1]
        stripped = raw.lstrip(" ")
        indent = len(raw) - len(stripped)
        closers = len(stripped) - len(stripped.lstrip(")"))
        if indent % 2:
            return detected_line
        actual = start_depth[lineno]
        if actual != indent // 2 + closers:
            if actual == indent // 2 or previous is None:
                return lineno
            return previous
        previous = lineno
    return detected_line


def read_sexprs(text: str) -> list[SExpr]:
    """Read every top-level list in ``text``."""
    tokens = _tokenize(text)
    forms: list[SExpr] = []
    stack: list[tuple[list, _Token]] = []
    for tok in tokens:
        if tok.text == "(":
            new: list = []
            if stack:
                stack[-1][0].append(new)
            stack.append((new, tok))
        elif tok.text == ")":
            if not stack:
                line = _blame_line(text, tokens, tok.line)
                raise ShopSyntaxError(
                    "unbalanced parentheses: unexpected ')'", line, tok.column if line == tok.line else None
                )
            done, _ = stack.pop()
            if not stack:
                forms.append(done)
        elif stack:
            stack[-1][0].append(tok.text)
        else:
            line = _blame_line(text, tokens, tok.line)
            raise ShopSyntaxError(
                f"stray token {tok.text!r} outside any list", line, tok.column if line == tok.line else None
            )
    if stack:
        line = _blame_line(text, tokens, tokens[-1].line)
        raise ShopSyntaxError("unbalanced parentheses: list not closed", line)
    return forms


def read_one(text: str) -> SExpr:
    forms = read_sexprs(text)
    if len(forms) != 1:
        raise ShopSyntaxError(f"expected exactly one top-level form, found {len(forms)}")
    return forms[0]


# ---------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class PAtom:
    head: str
    args: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.head or is_variable(self.head):
            raise ShopSyntaxError(f"bad atom head {self.head!r}")

    @property
    def is_ground(self) -> bool:
        return not any(is_variable(a) for a in self.args)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(a for a in self.args if is_variable(a))

    @classmethod
    def parse(cls, text: str) -> "PAtom":
        """``"(p a ?b)"`` -> ``PAtom("p", ("a", "?b"))``."""
        return _atom(read_one(text), "atom")

    def to_sexpr(self) -> list[str]:
        return [self.head, *self.args]

    def __str__(self) -> str:
        return "(" + " ".join(self.to_sexpr()) + ")"


Conjunction = tuple[PAtom, ...]


@dataclass(frozen=True)
class OperatorDef:
    head: PAtom
    precond: Conjunction = ()
    delete_list: Conjunction = ()
    add_list: Conjunction = ()
    cost: float = 1.0

    def __post_init__(self):
        if not self.head.head.startswith("!"):
            raise ShopSyntaxError(f"operator head {self.head.head!r} must start with '!'")
        bound = set(self.head.variables) | {v for a in self.precond for v in a.variables}
        for atom in self.delete_list + self.add_list:
            loose = set(atom.variables) - bound
            if loose:
                raise ShopSyntaxError(
                    f"operator {self.head.head}: effect variables {sorted(loose)} "
                    "not bound by head or precondition"
                )


@dataclass(frozen=True)
class MethodDef:
    head: PAtom
    branches: tuple[tuple[Conjunction, tuple[PAtom, ...]], ...]

    def __post_init__(self):
        if not self.branches:
            raise ShopSyntaxError(f"method {self.head.head} has no branches")
        if self.head.head.startswith("!"):
            raise ShopSyntaxError(f"method head {self.head.head!r} must not start with '!'")


@dataclass(frozen=True)
class AxiomDef:
    head: PAtom
    tails: tuple[Conjunction, ...]

    def __post_init__(self):
        if not self.tails:
            raise ShopSyntaxError(f"axiom {self.head.head} has no tails")


@dataclass(frozen=True)
class Domain:
    name: str
    methods: tuple[MethodDef, ...] = ()
    operators: tuple[OperatorDef, ...] = ()
    axioms: tuple[AxiomDef, ...] = ()

    def __post_init__(self):
        seen: set[tuple[str, int]] = set()
        for op in self.operators:
            key = (op.head.head, len(op.head.args))
            if key in seen:
                raise ShopSyntaxError(f"duplicate operator {key[0]}/{key[1]}")
            seen.add(key)
        method_heads = {m.head.head for m in self.methods}
        op_heads = {o.head.head for o in self.operators}
        axiom_heads = {a.head.head for a in self.axioms}
        clash = (method_heads & op_heads) | (method_heads & axiom_heads) | (op_heads & axiom_heads)
        if clash:
            raise ShopSyntaxError(f"head symbols used by more than one item kind: {sorted(clash)}")


@dataclass(frozen=True)
class Problem:
    name: str
    domain_name: str
    initial_state: tuple[PAtom, ...] = ()
    task_list: tuple[PAtom, ...] = ()

    def __post_init__(self):
        for where, atoms in (("initial state", self.initial_state), ("task list", self.task_list)):
            for atom in atoms:
                if not atom.is_ground:
                    raise ShopSyntaxError(f"variable in {where}: {atom}")


@dataclass(frozen=True)
class Plan:
    steps: tuple[PAtom, ...] = ()
    total_cost: float = 0.0

    def __post_init__(self):
        for step in self.steps:
            if not step.head.startswith("!") or not step.is_ground:
                raise ShopSyntaxError(f"plan step {step} is not a ground operator instance")

    def __len__(self) -> int:
        return len(self.steps)


# ---------------------------------------------------------------------------
# s-expression -> AST

def _atom(sx: SExpr, what: str) -> PAtom:
    if not isinstance(sx, list) or not sx or not all(isinstance(x, str) for x in sx):
        raise ShopSyntaxError(f"{what}: expected a flat list (head args...), got {_show(sx)}")
    return PAtom(sx[0], tuple(sx[1:]))


def _atoms(sx: SExpr, what: str) -> tuple[PAtom, ...]:
    if sx == "nil":
        return ()
    if not isinstance(sx, list):
        raise ShopSyntaxError(f"{what}: expected a list of atoms, got {_show(sx)}")
    return tuple(_atom(x, what) for x in sx)


def _show(sx: SExpr) -> str:
    return sx if isinstance(sx, str) else _print_flat(sx)


def _parse_method(item: list) -> MethodDef:
    if len(item) < 2:
        raise ShopSyntaxError(":method needs a head")
    head = _atom(item[1], ":method head")
    rest = [x for x in item[2:] if not isinstance(x, str) or x == "nil"]
    labels = [x for x in item[2:] if isinstance(x, str) and x != "nil"]
    if len(rest) + len(labels) != len(item) - 2 or len(rest) % 2:
        raise ShopSyntaxError(f":method {head.head}: branches must be (precondition subtasks) pairs")
    branches = tuple(
        (_atoms(rest[i], f"{head.head} precondition"), _atoms(rest[i + 1], f"{head.head} subtasks"))
        for i in range(0, len(rest), 2)
    )
    return MethodDef(head, branches)


def _parse_operator(item: list) -> OperatorDef:
    if len(item) not in (5, 6):
        raise ShopSyntaxError(
            f":operator expects (head precondition delete add [cost]), got {len(item) - 1} elements"
        )
    head = _atom(item[1], ":operator head")
    cost = 1.0
    if len(item) == 6:
        try:
            cost = float(item[5])
        except (TypeError, ValueError):
            raise ShopSyntaxError(f":operator {head.head}: cost must be a number") from None
    return OperatorDef(
        head,
        _atoms(item[2], f"{head.head} precondition"),
        _atoms(item[3], f"{head.head} delete list"),
        _atoms(item[4], f"{head.head} add list"),
        cost,
    )


def _parse_axiom(item: list) -> AxiomDef:
    if len(item) < 3:
        raise ShopSyntaxError(":- needs a head and at least one tail")
    head = _atom(item[1], ":- head")
    tails = tuple(_atoms(x, f"{head.head} tail") for x in item[2:] if not isinstance(x, str) or x == "nil")
    return AxiomDef(head, tails)


def parse_domain(sx: SExpr | str) -> Domain:
    if isinstance(sx, str):
        sx = read_one(sx)
    if not (isinstance(sx, list) and len(sx) == 3 and sx[0] == "defdomain"
            and isinstance(sx[1], str) and isinstance(sx[2], list)):
        raise ShopSyntaxError("expected (defdomain <name> (<items>...))")
    methods, operators, axioms = [], [], []
    for item in sx[2]:
        if not isinstance(item, list) or not item or not isinstance(item[0], str):
            raise ShopSyntaxError(f"domain item must be a keyword list, got {_show(item)}")
        keyword = item[0]
        if keyword == ":method":
            methods.append(_parse_method(item))
        elif keyword == ":operator":
            operators.append(_parse_operator(item))
        elif keyword == ":-":
            axioms.append(_parse_axiom(item))
        else:
            raise ShopSyntaxError(f"unknown domain item {keyword!r}")
    return Domain(sx[1], tuple(methods), tuple(operators), tuple(axioms))


def parse_problem(sx: SExpr | str) -> Problem:
    if isinstance(sx, str):
        sx = read_one(sx)
    if not (isinstance(sx, list) and len(sx) == 5 and sx[0] == "defproblem"
            and isinstance(sx[1], str) and isinstance(sx[2], str)):
        raise ShopSyntaxError("expected (defproblem <name> <domain> (<state>...) (<tasks>...))")
    return Problem(sx[1], sx[2], _atoms(sx[3], "initial state"), _atoms(sx[4], "task list"))


_COST_LINE = re.compile(r"^\s*;\s*cost\s+(\S+)\s*$", re.MULTILINE)


def parse_plan(text: str) -> Plan:
    """Read the output of :func:`print_plan`."""
    forms = read_sexprs(text)
    if len(forms) != 1:
        raise ShopSyntaxError("a plan file holds exactly one list of steps")
    steps = _atoms(forms[0], "plan step")
    m = _COST_LINE.search(text)
    cost = float(m.group(1)) if m else float(len(steps))
    return Plan(steps, cost)


# ---------------------------------------------------------------------------
# printing

def _print_flat(sx: SExpr) -> str:
    if isinstance(sx, str):
        return sx
    return "(" + " ".join(_print_flat(x) for x in sx) + ")"


def _fmt_cost(cost: float) -> str:
    return str(int(cost)) if float(cost).is_integer() else repr(float(cost))


def _conj(atoms: Iterable[PAtom]) -> str:
    return "(" + " ".join(str(a) for a in atoms) + ")"


def print_domain(d: Domain) -> str:
    out = [f"(defdomain {d.name}", "  ("]
    for m in d.methods:
        out.append(f"    (:method {m.head}")
        for pre, sub in m.branches:
            out.append(f"      {_conj(pre)}")
            out.append(f"      {_conj(sub)}")
        out[-1] += ")"
    for o in d.operators:
        out.append(f"    (:operator {o.head}")
        out.append(f"      {_conj(o.precond)}")
        out.append(f"      {_conj(o.delete_list)}")
        out.append(f"      {_conj(o.add_list)}")
        if o.cost != 1:
            out.append(f"      {_fmt_cost(o.cost)}")
        out[-1] += ")"
    for a in d.axioms:
        out.append(f"    (:- {a.head}")
        for tail in a.tails:
            out.append(f"      {_conj(tail)}")
        out[-1] += ")"
    out[-1] += "))"
    return "\n".join(out) + "\n"


def print_problem(p: Problem) -> str:
    out = [f"(defproblem {p.name} {p.domain_name}", "  ("]
    out += [f"    {a}" for a in p.initial_state]
    out[-1] += ")"
    out.append("  (")
    out += [f"    {t}" for t in p.task_list]
    out[-1] += "))"
    return "\n".join(out) + "\n"


def print_plan(pl: Plan) -> str:
    return f"; cost {_fmt_cost(pl.total_cost)}\n{_conj(pl.steps)}\n"


def plan_to_json(pl: Plan) -> dict:
    return {"steps": [s.to_sexpr() for s in pl.steps], "cost": pl.total_cost}


def plan_from_json(data: dict | str) -> Plan:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        steps = tuple(PAtom(s[0], tuple(s[1:])) for s in data["steps"])
        return Plan(steps, float(data["cost"]))
    except (KeyError, IndexError, TypeError) as exc:
        raise ShopSyntaxError(f"malformed plan JSON: {exc}") from None


def tokens_of(text: str) -> list[str]:
    """Token sequence with comments and whitespace removed."""
    return [t.text for t in _tokenize(text)]
