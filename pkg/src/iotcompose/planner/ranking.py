"""Ranking alternative plans by non-functional properties of the things they use."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from ..shop_syntax import Plan, Problem


@dataclass(frozen=True)
class RankingWeights:
    security: float = 1.0
    protocol: float = 1.0


@dataclass(frozen=True)
class RankedPlan:
    plan: Plan
    score: float
    score_breakdown: dict[str, float] = field(default_factory=dict)


def _score(plan: Plan, problem: Problem, weights: RankingWeights) -> RankedPlan:
    owners: dict[str, set[str]] = {}
    problems: dict[str, set[str]] = {}
    protocols: dict[str, set[str]] = {}
    for atom in problem.initial_state:
        if atom.head == "hasResources" and len(atom.args) == 3:
            owners.setdefault(atom.args[2], set()).add(atom.args[0])
        elif atom.head == "hasSecurityProblem" and len(atom.args) == 2:
            problems.setdefault(atom.args[0], set()).add(atom.args[1])
        elif atom.head == "supportsProtocol" and len(atom.args) == 2:
            protocols.setdefault(atom.args[0], set()).add(atom.args[1])

    involved: set[str] = set()
    pairs: set[tuple[str, str]] = set()
    for step in plan.steps:
        things = set()
        for arg in step.args:
            things |= owners.get(arg, set())
        involved |= things
        pairs.update(combinations(sorted(things), 2))

    security = sum(len(problems.get(t, ())) for t in involved)
    unmatched = sum(1 for a, b in pairs if not (protocols.get(a, set()) & protocols.get(b, set())))
    breakdown = {"security": weights.security * security, "protocol": weights.protocol * unmatched}
    return RankedPlan(plan, sum(breakdown.values()), breakdown)


def rank_plans(plans: Sequence[Plan], problem: Problem, weights: RankingWeights | None = None) -> list[RankedPlan]:
    """Score plans (lower is better) and sort them; ties keep discovery order.

    The score adds one point per security problem of every thing owning a
    resource named in the plan, plus one point per pair of things that meet
    in a step without a common protocol. Both terms are weighted.
    """
    weights = weights or RankingWeights()
    return sorted((_score(p, problem, weights) for p in plans), key=lambda r: r.score)
