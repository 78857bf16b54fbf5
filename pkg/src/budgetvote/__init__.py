"""Participatory budgeting: ranked approval ballots, argumentation graphs,
and budget-feasible winner selection."""

from .model import (
    Ballot,
    BudgetConfig,
    DomainError,
    Issue,
    Money,
    Proposal,
    ValidationError,
    Violation,
    validate_proposal,
)
from .process import Phase, PhaseSchedule, phase_at, proposing_allowed, results_visible
from .scoring import (
    ScoreBoard,
    ScoreRow,
    approval_score,
    budget_filter_ballots,
    build_scoreboard,
    classic_borda,
    max_preferences,
    partial_borda,
    single_vote,
    top_k_approval,
)
from .selection import Decision, RankedList, WinnerSet, decide, rank, select_winners

__all__ = [
    "Ballot",
    "BudgetConfig",
    "Decision",
    "DomainError",
    "Issue",
    "Money",
    "Phase",
    "PhaseSchedule",
    "Proposal",
    "RankedList",
    "ScoreBoard",
    "ScoreRow",
    "ValidationError",
    "Violation",
    "WinnerSet",
    "approval_score",
    "budget_filter_ballots",
    "build_scoreboard",
    "classic_borda",
    "decide",
    "max_preferences",
    "partial_borda",
    "phase_at",
    "proposing_allowed",
    "rank",
    "results_visible",
    "select_winners",
    "single_vote",
    "top_k_approval",
    "validate_proposal",
]

__version__ = "0.1.0"
