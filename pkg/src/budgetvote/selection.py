"""Turn scores into a total ranking and a budget-feasible winner set.

The ranking orders by Borda score, breaks ties by approval count, and as a
last resort by creation order. Cost is deliberately not a tiebreaker. Winner
selection is a single greedy top-down pass: proposals nobody approved never
win, anything that does not fit the remaining budget is skipped for good,
and skips never re-open (the walk is transparent, not value-optimal).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .model import Ballot, BudgetConfig, Money, Proposal, ValidationError
from .scoring import ScoreBoard, build_scoreboard


@dataclass(frozen=True)
class RankedEntry:
    proposal_id: str
    borda: int
    approval: int
    ordinal: int


@dataclass(frozen=True)
class RankedList:
    """Total order over proposals: borda desc, approval desc, ordinal asc."""

    entries: tuple[RankedEntry, ...]

    def ids(self) -> tuple[str, ...]:
        return tuple(e.proposal_id for e in self.entries)


@dataclass(frozen=True)
class WinnerSet:
    """Winners in rank order plus how the budget was used."""

    winners: tuple[str, ...]
    spent: Money
    leftover: Money


def rank(scoreboard: ScoreBoard, proposals: Iterable[Proposal]) -> RankedList:
    """Order every scoreboard row by the tiebreak chain.

    Every scoreboard row must have a matching proposal (the ordinal comes
    from there); ordinals are unique by construction, so the order is total.
    """
    by_id = {p.id: p for p in proposals}
    entries = []
    for pid, row in scoreboard.rows.items():
        if pid not in by_id:
            raise ValidationError(
                "unknown-proposal", f"scoreboard row for unknown proposal {pid}"
            )
        entries.append(
            RankedEntry(
                proposal_id=pid,
                borda=row.borda,
                approval=row.approval,
                ordinal=by_id[pid].ordinal,
            )
        )
    ordinals = [e.ordinal for e in entries]
    if len(set(ordinals)) != len(ordinals):
        raise ValidationError("duplicate-ordinal", "proposal ordinals must be unique")
    entries.sort(key=lambda e: (-e.borda, -e.approval, e.ordinal))
    return RankedList(entries=tuple(entries))


def select_winners(
    ranked: RankedList, costs: Mapping[str, Money], budget: Money
) -> WinnerSet:
    """Greedy top-down walk: include whatever still fits, skip the rest.

    Zero-approval proposals never win. A skipped proposal is not revisited
    even if a later skip would have left room for it.
    """
    remaining = budget
    winners = []
    for entry in ranked.entries:
        if entry.approval == 0:
            continue
        cost = costs[entry.proposal_id]
        if cost <= remaining:
            winners.append(entry.proposal_id)
            remaining = remaining - cost
    return WinnerSet(
        winners=tuple(winners), spent=budget - remaining, leftover=remaining
    )


@dataclass(frozen=True)
class Decision:
    scoreboard: ScoreBoard
    ranking: RankedList
    winners: WinnerSet


def decide(
    ballots: Iterable[Ballot],
    proposals: Iterable[Proposal],
    budget_config: BudgetConfig,
) -> Decision:
    """Full pipeline: tally, rank, select winners. Deterministic.

    Tombstoned proposals are stripped from every ballot (ranks compacted)
    before any scorer runs; references to ids that never existed are errors.
    """
    all_props = list(proposals)
    known = {p.id for p in all_props}
    active = [p for p in all_props if not p.removed]
    active_ids = {p.id for p in active}

    profile = []
    for ballot in ballots:
        prefs = ballot.preferences if isinstance(ballot, Ballot) else tuple(ballot)
        for pid in prefs:
            if pid not in known:
                raise ValidationError(
                    "unknown-proposal", f"ballot references unknown proposal {pid}"
                )
        profile.append(tuple(pid for pid in prefs if pid in active_ids))

    scoreboard = build_scoreboard(profile, [p.id for p in active])
    ranking = rank(scoreboard, active)
    costs = {p.id: p.cost for p in active}
    winners = select_winners(ranking, costs, budget_config.budget)
    return Decision(scoreboard=scoreboard, ranking=ranking, winners=winners)
