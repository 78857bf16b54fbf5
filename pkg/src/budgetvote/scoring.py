"""Pure scoring functions over ballot profiles.

The decide rule is a partial Borda count: with N the length of the longest
ballot, rank r scores N - r + 1 and everything unranked scores an implicit 0.
Alongside it live the comparison scorers (approval, single vote, top-k
approval, the classic full-permutation Borda variants) and the
budget-restriction ballot transform.

All functions accept either `model.Ballot` objects or plain sequences of
proposal ids and treat their inputs as immutable.

The budget filter drops an unaffordable entry and keeps scanning the rest of
the ballot (skip-and-continue). The alternative, cutting the ballot at the
first unaffordable entry, was checked against the replay of the bundled
experiment data and does not reproduce its published distribution;
skip-and-continue does, exactly.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Mapping, Sequence

from .model import Ballot, Money, ValidationError

Prefs = tuple[str, ...]


def _prefs(ballots: Iterable) -> list[Prefs]:
    out = []
    for b in ballots:
        if isinstance(b, Ballot):
            out.append(b.preferences)
        else:
            out.append(tuple(str(p) for p in b))
    return out


def max_preferences(ballots: Iterable) -> int:
    """Length of the longest ballot (the global N); 0 when nothing was ranked."""
    return max((len(p) for p in _prefs(ballots)), default=0)


def partial_borda(ballots: Iterable) -> dict[str, int]:
    """Sum of N - r + 1 over every ballot ranking a proposal at rank r.

    Proposals never ranked by anyone are simply absent (score 0).
    """
    profile = _prefs(ballots)
    n = max((len(p) for p in profile), default=0)
    scores: Counter[str] = Counter()
    for prefs in profile:
        for r, pid in enumerate(prefs, start=1):
            scores[pid] += n - r + 1
    return dict(scores)


def approval_score(ballots: Iterable) -> dict[str, int]:
    """Number of ballots containing a proposal at any rank."""
    scores: Counter[str] = Counter()
    for prefs in _prefs(ballots):
        scores.update(prefs)
    return dict(scores)


def single_vote(ballots: Iterable) -> dict[str, int]:
    """Count only each ballot's first preference."""
    scores: Counter[str] = Counter()
    for prefs in _prefs(ballots):
        if prefs:
            scores[prefs[0]] += 1
    return dict(scores)


def top_k_approval(ballots: Iterable, k: int) -> dict[str, int]:
    """Approval over each ballot truncated to its first k entries."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return approval_score([prefs[:k] for prefs in _prefs(ballots)])


BordaVariant = Literal["n_to_1", "zero_based", "dowdall"]


def classic_borda(
    rankings: Sequence[Sequence[str]], variant: BordaVariant = "n_to_1"
) -> dict[str, int | Fraction]:
    """Full-permutation Borda count in one of three scorings.

    Rank r of n choices scores n - r + 1 (`n_to_1`), n - r (`zero_based`),
    or the harmonic 1/r (`dowdall`, summed as exact rationals). Every ranking
    must be a permutation of the same choice set.
    """
    profile = _prefs(rankings)
    if not profile:
        return {}
    choices = frozenset(profile[0])
    n = len(choices)
    for prefs in profile:
        if len(prefs) != n or frozenset(prefs) != choices:
            raise ValueError(
                f"every ranking must be a permutation of {sorted(choices)}, got {list(prefs)}"
            )
    if variant == "n_to_1":
        points = {r: n - r + 1 for r in range(1, n + 1)}
    elif variant == "zero_based":
        points = {r: n - r for r in range(1, n + 1)}
    elif variant == "dowdall":
        points = {r: Fraction(1, r) for r in range(1, n + 1)}
    else:
        raise ValueError(f"unknown variant {variant!r}")
    scores: dict[str, int | Fraction] = {c: 0 for c in choices}
    for prefs in profile:
        for r, choice in enumerate(prefs, start=1):
            scores[choice] += points[r]
    return scores


def budget_filter_ballots(
    ballots: Iterable, costs: Mapping[str, Money], budget: Money
) -> list[Prefs]:
    """Restrict each ballot so its kept preferences stay within the budget.

    Walks preferences in order keeping a running cost; an entry is kept iff
    it still fits, otherwise dropped while the scan continues. Kept entries
    retain their relative order (compacted ranks). Requires every ranked
    proposal to cost at most the budget, so the first preference always
    survives.
    """
    filtered = []
    for prefs in _prefs(ballots):
        kept = []
        running = Money(0)
        for pid in prefs:
            if pid not in costs:
                raise ValueError(f"no cost known for proposal {pid}")
            cost = costs[pid]
            if cost > budget:
                raise ValueError(
                    f"proposal {pid} costs {cost}, more than the whole budget {budget}"
                )
            if running + cost <= budget:
                kept.append(pid)
                running = running + cost
        filtered.append(tuple(kept))
    return filtered


@dataclass(frozen=True)
class ScoreRow:
    """Per-proposal tallies; `priority_histogram[r-1]` counts rank-r choices."""

    borda: int
    approval: int
    priority_histogram: tuple[int, ...]

    def single(self) -> int:
        return self.priority_histogram[0] if self.priority_histogram else 0

    def top_k(self, k: int) -> int:
        return sum(self.priority_histogram[:k])


@dataclass(frozen=True)
class ScoreBoard:
    """All per-proposal rows plus the global N they were scored against."""

    n_max: int
    rows: Mapping[str, ScoreRow]

    def column_sums(self) -> tuple[int, ...]:
        return tuple(
            sum(row.priority_histogram[r] for row in self.rows.values())
            for r in range(self.n_max)
        )


def build_scoreboard(ballots: Iterable, proposal_ids: Iterable[str]) -> ScoreBoard:
    """Histogram every ballot, then derive Borda and approval per proposal.

    `proposal_ids` is the id universe; proposals nobody ranked get all-zero
    rows. Ballots may only reference ids from the universe.
    """
    ids = [str(p) for p in proposal_ids]
    known = set(ids)
    if len(known) != len(ids):
        raise ValueError("duplicate proposal ids")
    profile = _prefs(ballots)
    n = max((len(p) for p in profile), default=0)
    hist = {pid: [0] * n for pid in ids}
    for prefs in profile:
        for r, pid in enumerate(prefs, start=1):
            if pid not in known:
                raise ValidationError(
                    "unknown-proposal", f"ballot references unknown proposal {pid}"
                )
            hist[pid][r - 1] += 1
    rows = {
        pid: ScoreRow(
            borda=sum(count * (n - r) for r, count in enumerate(counts)),
            approval=sum(counts),
            priority_histogram=tuple(counts),
        )
        for pid, counts in hist.items()
    }
    return ScoreBoard(n_max=n, rows=rows)
