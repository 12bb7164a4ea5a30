"""HTN planning: logic layer, decomposition search and plan ranking."""

from .logic import (
    PlanningError,
    State,
    SubstitutionStream,
    apply_operator,
    resolve,
    satisfy,
    substitute,
    unify,
    walk,
)
from .ranking import RankedPlan, RankingWeights, rank_plans
from .search import SearchLimits, SearchResult, SearchTruncated, find_plans, replay, search

__all__ = [
    "PlanningError",
    "RankedPlan",
    "RankingWeights",
    "SearchLimits",
    "SearchResult",
    "SearchTruncated",
    "State",
    "SubstitutionStream",
    "apply_operator",
    "find_plans",
    "rank_plans",
    "replay",
    "resolve",
    "satisfy",
    "search",
    "substitute",
    "unify",
    "walk",
]
