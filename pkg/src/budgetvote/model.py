"""Shared domain types: money, proposals, budget rules, ballots, issues.

Everything here is an immutable value object. Mutation of live state is the
store's job; these types only carry data and enforce their own local
invariants.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from datetime import datetime, timezone


class DomainError(Exception):
    """A rule of the decision process was violated.

    `code` is a stable, machine-readable slug; `details` carries optional
    structured context (bounds, offending ids) for API error bodies.
    """

    def __init__(self, code: str, message: str, **details):
        super().__init__(message)
        self.code = code
        self.message = message
        self.details = details


class ValidationError(DomainError):
    """Input content is malformed or references the wrong things."""


@dataclass(frozen=True, order=True)
class Money:
    """An exact, non-negative amount in euro cents."""

    cents: int

    def __post_init__(self):
        if not isinstance(self.cents, int) or isinstance(self.cents, bool):
            raise ValueError(f"money must be integer cents, got {self.cents!r}")
        if self.cents < 0:
            raise ValueError(f"money must be non-negative, got {self.cents}")

    def __add__(self, other: "Money") -> "Money":
        return Money(self.cents + other.cents)

    def __sub__(self, other: "Money") -> "Money":
        return Money(self.cents - other.cents)

    @classmethod
    def from_euros(cls, value: "int | str | Money") -> "Money":
        """Parse whole or decimal euros ("20000", "99.50") into cents."""
        if isinstance(value, Money):
            return value
        if isinstance(value, int) and not isinstance(value, bool):
            return cls(value * 100)
        text = str(value).strip()
        m = re.fullmatch(r"(\d+)(?:\.(\d{1,2}))?", text)
        if not m:
            raise ValueError(f"not a euro amount: {value!r}")
        whole, frac = m.group(1), m.group(2) or ""
        return cls(int(whole) * 100 + int(frac.ljust(2, "0") or 0))

    def euros(self) -> str:
        """Render as whole euros when even, otherwise with two decimals."""
        if self.cents % 100 == 0:
            return str(self.cents // 100)
        return f"{self.cents // 100}.{self.cents % 100:02d}"

    def __str__(self) -> str:
        return self.euros()


#: Opaque identifier for a natural person, supplied by the identity seam.
ParticipantId = str


@dataclass(frozen=True)
class BudgetConfig:
    """Total budget plus the allowed cost range for a single proposal."""

    budget: Money
    cost_min: Money = Money(0)
    cost_max: Money | None = None  # defaults to the full budget

    def __post_init__(self):
        if self.cost_max is None:
            object.__setattr__(self, "cost_max", self.budget)
        if not Money(0) <= self.cost_min <= self.cost_max <= self.budget:
            raise ValueError(
                f"need 0 <= cost_min <= cost_max <= budget, got "
                f"{self.cost_min}/{self.cost_max}/{self.budget}"
            )


@dataclass(frozen=True)
class Proposal:
    """A cost-bearing position that ballots refer to.

    `ordinal` is the creation order within an issue and serves as the final
    tiebreaker; `removed` is a tombstone, never physical deletion, so stored
    ballots stay interpretable.
    """

    id: str
    text: str
    cost: Money
    ordinal: int
    author: ParticipantId = ""
    removed: bool = False

    def tombstoned(self) -> "Proposal":
        return replace(self, removed=True)

    def with_cost(self, cost: Money) -> "Proposal":
        return replace(self, cost=cost)


@dataclass(frozen=True)
class Violation:
    """One violated proposal bound; `code` in {below-min, above-max, empty-text}."""

    code: str
    message: str


def validate_proposal(proposal: Proposal, config: BudgetConfig) -> list[Violation]:
    """Return every violated bound; an empty list means the proposal is ok.

    Pure: never raises, same inputs give the same output.
    """
    violations = []
    if not proposal.text.strip():
        violations.append(Violation("empty-text", "proposal text must not be empty"))
    if proposal.cost < config.cost_min:
        violations.append(
            Violation(
                "below-min",
                f"cost {proposal.cost} is below the minimum of {config.cost_min}",
            )
        )
    if proposal.cost > config.cost_max:
        violations.append(
            Violation(
                "above-max",
                f"cost {proposal.cost} is above the maximum of {config.cost_max}",
            )
        )
    return violations


@dataclass(frozen=True)
class Ballot:
    """One participant's ordered list of approved proposal ids.

    First entry = highest priority. May be empty (approving nothing).
    Duplicates are rejected here; referential checks against an issue's
    proposals happen at submission and again at tally.
    """

    participant: ParticipantId
    preferences: tuple[str, ...]
    sequence: int = 1

    def __post_init__(self):
        prefs = tuple(str(p) for p in self.preferences)
        object.__setattr__(self, "preferences", prefs)
        if len(set(prefs)) != len(prefs):
            dupes = sorted({p for p in prefs if prefs.count(p) > 1})
            raise ValidationError(
                "duplicate-preference",
                f"ballot ranks the same proposal twice: {', '.join(dupes)}",
                duplicates=dupes,
            )


@dataclass(frozen=True)
class Issue:
    """Scope of one decision: budget rules, schedule, and its proposals."""

    id: str
    title: str
    budget_config: BudgetConfig
    schedule: "PhaseSchedule"
    proposals: tuple[Proposal, ...] = ()

    def __post_init__(self):
        ordinals = [p.ordinal for p in self.proposals]
        if len(set(ordinals)) != len(ordinals):
            raise ValueError("proposal ordinals must be unique within an issue")

    def proposal(self, proposal_id: str) -> Proposal | None:
        for p in self.proposals:
            if p.id == proposal_id:
                return p
        return None

    def active_proposals(self) -> tuple[Proposal, ...]:
        return tuple(p for p in self.proposals if not p.removed)

    def next_ordinal(self) -> int:
        return max((p.ordinal for p in self.proposals), default=0) + 1

    def with_proposal(self, proposal: Proposal) -> "Issue":
        if self.proposal(proposal.id) is not None:
            raise ValueError(f"duplicate proposal id {proposal.id}")
        return replace(self, proposals=self.proposals + (proposal,))

    def replace_proposal(self, proposal: Proposal) -> "Issue":
        updated = tuple(proposal if p.id == proposal.id else p for p in self.proposals)
        return replace(self, proposals=updated)


def parse_rfc3339(text: str) -> datetime:
    """Parse an RFC-3339 timestamp; naive inputs are taken as UTC."""
    cleaned = text.strip()
    if cleaned.endswith(("Z", "z")):
        cleaned = cleaned[:-1] + "+00:00"
    dt = datetime.fromisoformat(cleaned)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt


def format_rfc3339(dt: datetime) -> str:
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")
