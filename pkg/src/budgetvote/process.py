"""Phase state machine and the business rules of one decision process.

What is allowed when:

  proposing  new proposals accepted; nobody can vote yet
  review     proposals closed for editorial work, voting not yet open
  voting     ballots accepted; proposing may still be open in parallel
             when no proposal deadline was set
  closed     everything frozen, results visible

Every timestamp in the schedule is optional. With nothing set, voting is
open from the start and proposing stays allowed alongside it; results are
then live (there is no close to wait for). The clock is always an explicit
`now` argument, never read from the system.

All rule functions are pure: they take the current state and return the new
state plus the produced record, or raise. Durability is the store's job.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from datetime import datetime
from types import MappingProxyType
from typing import Mapping

from .model import (
    Ballot,
    DomainError,
    Issue,
    Money,
    ParticipantId,
    Proposal,
    validate_proposal,
)


class PhaseError(DomainError):
    """The requested action is not allowed in the current phase."""


class ProposalRejected(DomainError):
    """Proposal content violates the issue's bounds."""

    def __init__(self, violations):
        super().__init__(
            violations[0].code,
            "; ".join(v.message for v in violations),
            violations=[{"code": v.code, "message": v.message} for v in violations],
        )
        self.violations = violations


class Phase(enum.Enum):
    PROPOSING = "proposing"
    REVIEW = "review"
    VOTING = "voting"
    CLOSED = "closed"


@dataclass(frozen=True)
class PhaseSchedule:
    """Optional deadlines gating intake, voting, and result visibility."""

    proposals_close_at: datetime | None = None
    voting_opens_at: datetime | None = None
    voting_closes_at: datetime | None = None
    results_always_visible: bool = False

    def __post_init__(self):
        if self.voting_closes_at is not None:
            if (
                self.proposals_close_at is not None
                and self.proposals_close_at > self.voting_closes_at
            ):
                raise ValueError("proposals must close no later than voting closes")
            if (
                self.voting_opens_at is not None
                and self.voting_opens_at > self.voting_closes_at
            ):
                raise ValueError("voting cannot open after it closes")


def _voting_open(schedule: PhaseSchedule, now: datetime) -> bool:
    if schedule.voting_opens_at is not None and now < schedule.voting_opens_at:
        return False
    return schedule.voting_closes_at is None or now < schedule.voting_closes_at


def _proposals_open(schedule: PhaseSchedule, now: datetime) -> bool:
    return schedule.proposals_close_at is None or now < schedule.proposals_close_at


def phase_at(schedule: PhaseSchedule, now: datetime) -> Phase:
    """Derive the phase from schedule and clock; never stored anywhere."""
    if schedule.voting_closes_at is not None and now >= schedule.voting_closes_at:
        return Phase.CLOSED
    if _voting_open(schedule, now):
        return Phase.VOTING
    if _proposals_open(schedule, now):
        return Phase.PROPOSING
    return Phase.REVIEW


def proposing_allowed(schedule: PhaseSchedule, now: datetime) -> bool:
    """Proposing is open in the proposing phase, and during voting as long
    as no proposal deadline has passed (the two can run in parallel)."""
    phase = phase_at(schedule, now)
    if phase is Phase.PROPOSING:
        return True
    if phase is Phase.VOTING:
        return _proposals_open(schedule, now)
    return False


def results_visible(schedule: PhaseSchedule, now: datetime) -> bool:
    """Results are hidden while a running vote still has a close ahead.

    Visible when configured always-visible, once voting has closed, or when
    no close exists at all (an endless vote shows its results live).
    """
    if schedule.results_always_visible:
        return True
    if schedule.voting_closes_at is None:
        return True
    return now >= schedule.voting_closes_at


@dataclass(frozen=True)
class IssueState:
    """An issue plus its live ballots, keyed by participant."""

    issue: Issue
    ballots: Mapping[ParticipantId, Ballot] = MappingProxyType({})

    def ballot_list(self) -> list[Ballot]:
        return list(self.ballots.values())

    def has_ballots(self) -> bool:
        return bool(self.ballots)


def submit_proposal(
    state: IssueState,
    text: str,
    cost: Money,
    author: ParticipantId,
    now: datetime,
    proposal_id: str | None = None,
) -> tuple[IssueState, Proposal]:
    """Accept a new proposal if the phase permits and the bounds hold.

    Assigns the next creation ordinal. Raises PhaseError("phase-closed") or
    ProposalRejected with every violated bound.
    """
    issue = state.issue
    if not proposing_allowed(issue.schedule, now):
        raise PhaseError("phase-closed", "new proposals are not allowed right now")
    ordinal = issue.next_ordinal()
    proposal = Proposal(
        id=proposal_id or f"p{ordinal}",
        text=text,
        cost=cost,
        ordinal=ordinal,
        author=author,
    )
    violations = validate_proposal(proposal, issue.budget_config)
    if violations:
        raise ProposalRejected(violations)
    return replace(state, issue=issue.with_proposal(proposal)), proposal


def submit_ballot(
    state: IssueState,
    participant: ParticipantId,
    preferences: list[str],
    now: datetime,
) -> tuple[IssueState, Ballot]:
    """Accept a ballot during voting; it fully replaces any prior one.

    Every preference must reference an existing, non-removed proposal.
    """
    issue = state.issue
    if phase_at(issue.schedule, now) is not Phase.VOTING:
        raise PhaseError("phase-not-voting", "voting is not open right now")
    previous = state.ballots.get(participant)
    ballot = Ballot(
        participant=participant,
        preferences=tuple(preferences),
        sequence=previous.sequence + 1 if previous else 1,
    )
    for pid in ballot.preferences:
        proposal = issue.proposal(pid)
        if proposal is None:
            raise DomainError("unknown-proposal", f"no proposal {pid}")
        if proposal.removed:
            raise DomainError("removed-proposal", f"proposal {pid} was removed")
    ballots = dict(state.ballots)
    ballots[participant] = ballot
    return replace(state, ballots=MappingProxyType(ballots)), ballot


def _require_editable(state: IssueState, now: datetime, what: str) -> None:
    # Frozen once anyone could have voted: any existing ballot, or a phase
    # where voting is (or was) possible.
    phase = phase_at(state.issue.schedule, now)
    if state.has_ballots() or phase not in (Phase.PROPOSING, Phase.REVIEW):
        raise PhaseError(
            "cost-frozen", f"{what} is frozen once participants could vote"
        )


def edit_proposal_cost(
    state: IssueState, proposal_id: str, new_cost: Money, now: datetime
) -> tuple[IssueState, Proposal]:
    """Change a cost while nobody has voted and voting has not opened."""
    issue = state.issue
    proposal = issue.proposal(proposal_id)
    if proposal is None:
        raise DomainError("unknown-proposal", f"no proposal {proposal_id}")
    _require_editable(state, now, "the cost")
    updated = proposal.with_cost(new_cost)
    violations = validate_proposal(updated, issue.budget_config)
    if violations:
        raise ProposalRejected(violations)
    return replace(state, issue=issue.replace_proposal(updated)), updated


def remove_proposal(
    state: IssueState, proposal_id: str, now: datetime
) -> tuple[IssueState, Proposal]:
    """Tombstone a proposal; same freeze rule as cost edits."""
    issue = state.issue
    proposal = issue.proposal(proposal_id)
    if proposal is None:
        raise DomainError("unknown-proposal", f"no proposal {proposal_id}")
    _require_editable(state, now, "the proposal list")
    updated = proposal.tombstoned()
    return replace(state, issue=issue.replace_proposal(updated)), updated
