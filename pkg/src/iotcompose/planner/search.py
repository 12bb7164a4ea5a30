"""Total-order, SHOP-style task decomposition interpreted directly over the AST."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..shop_syntax import Domain, MethodDef, OperatorDef, PAtom, Plan, Problem
from .logic import PlanningError, State, apply_operator, satisfy, substitute, unify


class SearchTruncated(PlanningError):
    """No plan was found and at least one branch hit the depth limit."""


@dataclass(frozen=True)
class SearchLimits:
    max_depth: int = 64
    max_plans: int = 8

    def __post_init__(self):
        if self.max_depth < 1 or self.max_plans < 1:
            raise ValueError("search limits must be >= 1")


@dataclass
class SearchResult:
    plans: list[Plan] = field(default_factory=list)
    truncated: bool = False


class _Search:
    def __init__(self, domain: Domain, limits: SearchLimits):
        self.limits = limits
        self.axioms = domain.axioms
        self.operators: dict[tuple[str, int], list[OperatorDef]] = {}
        for op in domain.operators:
            self.operators.setdefault((op.head.head, len(op.head.args)), []).append(op)
        self.methods: dict[tuple[str, int], list[MethodDef]] = {}
        for m in domain.methods:
            self.methods.setdefault((m.head.head, len(m.head.args)), []).append(m)
        self.result = SearchResult()

    def full(self) -> bool:
        return len(self.result.plans) >= self.limits.max_plans

    def seek(self, state: State, tasks: tuple[PAtom, ...], steps: tuple[PAtom, ...],
             cost: float, depth: int) -> None:
        if self.full():
            return
        if not tasks:
            self.result.plans.append(Plan(steps, cost))
            return
        if depth >= self.limits.max_depth:
            self.result.truncated = True
            return
        task, rest = tasks[0], tasks[1:]
        key = (task.head, len(task.args))
        if task.head.startswith("!"):
            for op in self.operators.get(key, ()):
                s = unify(op.head, task)
                if s is None:
                    continue
                answers = satisfy(state, self.axioms, op.precond, s, self.limits.max_depth)
                for s1 in answers:
                    step = substitute(op.head, s1)
                    self.seek(apply_operator(state, op, s1), rest, steps + (step,), cost + op.cost, depth + 1)
                    if self.full():
                        return
                self.result.truncated |= answers.truncated
        else:
            for method in self.methods.get(key, ()):
                s = unify(method.head, task)
                if s is None:
                    continue
                for precond, subtasks in method.branches:
                    answers = satisfy(state, self.axioms, precond, s, self.limits.max_depth)
                    for s1 in answers:
                        expanded = tuple(substitute(t, s1) for t in subtasks)
                        for t in expanded:
                            if not t.is_ground:
                                raise PlanningError(f"method {method.head.head} produced non-ground subtask {t}")
                        self.seek(state, expanded + rest, steps, cost, depth + 1)
                        if self.full():
                            return
                    self.result.truncated |= answers.truncated


def search(domain: Domain, problem: Problem, limits: SearchLimits | None = None) -> SearchResult:
    """Depth-first decomposition; plans come back in discovery order."""
    if problem.domain_name != domain.name:
        raise PlanningError(f"problem is for domain {problem.domain_name!r}, not {domain.name!r}")
    run = _Search(domain, limits or SearchLimits())
    run.seek(State(problem.initial_state), problem.task_list, (), 0.0, 0)
    return run.result


def find_plans(domain: Domain, problem: Problem, limits: SearchLimits | None = None) -> list[Plan]:
    """Up to ``limits.max_plans`` plans; ``[]`` means no plan exists.

    Raises :class:`SearchTruncated` when nothing was found but the depth
    limit cut off part of the search.
    """
    result = search(domain, problem, limits)
    if not result.plans and result.truncated:
        raise SearchTruncated("search truncated by the depth limit before any plan was found")
    return result.plans


def replay(domain: Domain, problem: Problem, plan: Plan) -> State:
    """Re-execute ``plan`` from the initial state, checking every precondition.

    Operators whose precondition binds variables outside the head can apply in
    several ways; replay backtracks over them and returns the first final state
    reached.
    """
    by_key = {(op.head.head, len(op.head.args)): op for op in domain.operators}
    ops = []
    for i, step in enumerate(plan.steps):
        op = by_key.get((step.head, len(step.args)))
        s = unify(op.head, step) if op is not None else None
        if s is None:
            raise PlanningError(f"step {i}: no operator matches {step}")
        ops.append((op, s))

    def run(state: State, i: int) -> State | None:
        if i == len(ops):
            return state
        op, s = ops[i]
        for answer in satisfy(state, domain.axioms, op.precond, s):
            final = run(apply_operator(state, op, answer), i + 1)
            if final is not None:
                return final
        return None

    final = run(State(problem.initial_state), 0)
    if final is None:
        raise PlanningError("plan is not executable from the initial state")
    return final
