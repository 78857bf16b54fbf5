"""Durable persistence: append-only event log plus file import/export.

The log is newline-delimited JSON, one self-describing record per line,
with a versioned header line. State is rebuilt by replaying events, so a
restart always lands exactly where the previous run stopped.

Ballot events never store raw participant ids: the log keeps a salted
one-way digest (salt lives in the header), which still lets replay enforce
one live ballot per person while keeping the log anonymous.
"""

from __future__ import annotations

import hashlib
import json
import os
import secrets
import threading
from dataclasses import dataclass, replace as dc_replace
from datetime import datetime
from pathlib import Path
from typing import Mapping

from . import process
from .arggraph import ArgumentGraph, ReviewCase, cast_review_vote
from .model import (
    Ballot,
    DomainError,
    Issue,
    Money,
    ParticipantId,
    Proposal,
    format_rfc3339,
)
from .scoring import ScoreBoard
from .selection import Decision, RankedList, WinnerSet, decide

LOG_FORMAT = "budgetvote-log"
LOG_VERSION = 1

EVENT_KINDS = (
    "proposal-added",
    "proposal-edited",
    "proposal-tombstoned",
    "ballot-submitted",
    "statement-added",
    "argument-added",
    "review-vote",
)


class StoreError(DomainError):
    pass


class ParseError(DomainError):
    """A line of an input file could not be understood."""

    def __init__(self, path, line: int, message: str):
        super().__init__("parse-error", f"{path}:{line}: {message}", line=line)
        self.path = str(path)
        self.line = line


@dataclass(frozen=True)
class Event:
    seq: int
    at: str  # RFC-3339
    kind: str
    payload: dict


class EventLog:
    """Append-only JSONL file; appends are fsynced before returning."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self.salt = secrets.token_hex(8)
        self._last_seq = 0
        self._events: list[Event] = []
        if self.path.exists() and self.path.stat().st_size > 0:
            self._load()
        else:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            header = {"format": LOG_FORMAT, "version": LOG_VERSION, "salt": self.salt}
            with open(self.path, "w", encoding="utf-8") as f:
                f.write(json.dumps(header) + "\n")
                f.flush()
                os.fsync(f.fileno())

    def _load(self) -> None:
        with open(self.path, encoding="utf-8") as f:
            lines = f.read().splitlines()
        try:
            header = json.loads(lines[0])
        except json.JSONDecodeError as exc:
            raise StoreError("corrupt-log", f"unreadable log header: {exc}") from exc
        if header.get("format") != LOG_FORMAT or header.get("version") != LOG_VERSION:
            raise StoreError(
                "corrupt-log", f"unsupported log header {lines[0][:80]!r}"
            )
        self.salt = header["salt"]
        for n, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                event = Event(
                    seq=record["seq"],
                    at=record["at"],
                    kind=record["kind"],
                    payload=record["payload"],
                )
            except (json.JSONDecodeError, KeyError) as exc:
                raise StoreError("corrupt-log", f"bad event at line {n}: {exc}") from exc
            if event.seq != self._last_seq + 1:
                raise StoreError(
                    "corrupt-log",
                    f"event sequence jumped from {self._last_seq} to {event.seq}",
                )
            if event.kind not in EVENT_KINDS:
                raise StoreError("corrupt-log", f"unknown event kind {event.kind!r}")
            self._events.append(event)
            self._last_seq = event.seq

    def append(self, kind: str, at: datetime, payload: dict) -> Event:
        if kind not in EVENT_KINDS:
            raise StoreError("bad-event", f"unknown event kind {kind!r}")
        event = Event(
            seq=self._last_seq + 1, at=format_rfc3339(at), kind=kind, payload=payload
        )
        line = json.dumps(
            {"seq": event.seq, "at": event.at, "kind": kind, "payload": payload},
            ensure_ascii=False,
        )
        with open(self.path, "a", encoding="utf-8") as f:
            f.write(line + "\n")
            f.flush()
            os.fsync(f.fileno())
        self._events.append(event)
        self._last_seq = event.seq
        return event

    def events(self) -> tuple[Event, ...]:
        return tuple(self._events)

    def participant_digest(self, participant: ParticipantId) -> str:
        return hashlib.sha256(f"{self.salt}:{participant}".encode()).hexdigest()[:16]


class IssueStore:
    """Single-writer store for one issue: state, graph, and review queues.

    Reads hand out immutable snapshots; every mutation runs the process
    rules, appends exactly one event, then swaps the in-memory state.
    """

    def __init__(self, directory, issue: Issue):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.log = EventLog(self.directory / "events.jsonl")
        self._lock = threading.Lock()
        self._state = process.IssueState(issue=issue)
        self.graph = ArgumentGraph(decision_issue=True)
        self.reviews: dict[tuple[str, str], ReviewCase] = {}
        for event in self.log.events():
            self._apply(event)

    @property
    def state(self) -> process.IssueState:
        return self._state

    @property
    def issue(self) -> Issue:
        return self._state.issue

    def ballots(self) -> list[Ballot]:
        return self._state.ballot_list()

    # --- replay ---------------------------------------------------------

    def _apply(self, event: Event) -> None:
        """Apply one event unconditionally; rules were checked at append."""
        p = event.payload
        if event.kind == "proposal-added":
            proposal = Proposal(
                id=p["id"],
                text=p["text"],
                cost=Money(p["cost_cents"]),
                ordinal=p["ordinal"],
                author=p.get("author", ""),
            )
            issue = self._state.issue.with_proposal(proposal)
            self._state = process.IssueState(issue=issue, ballots=self._state.ballots)
            self.graph.add_statement(
                proposal.text, is_position=True, cost=proposal.cost, node_id=proposal.id
            )
        elif event.kind == "proposal-edited":
            issue = self._state.issue
            proposal = issue.proposal(p["id"]).with_cost(Money(p["cost_cents"]))
            self._state = process.IssueState(
                issue=issue.replace_proposal(proposal), ballots=self._state.ballots
            )
            node = self.graph.statements[proposal.id]
            self.graph.statements[proposal.id] = dc_replace(node, cost=proposal.cost)
        elif event.kind == "proposal-tombstoned":
            issue = self._state.issue
            proposal = issue.proposal(p["id"]).tombstoned()
            self._state = process.IssueState(
                issue=issue.replace_proposal(proposal), ballots=self._state.ballots
            )
        elif event.kind == "ballot-submitted":
            ballot = Ballot(
                participant=p["participant"],
                preferences=tuple(p["preferences"]),
                sequence=p["sequence"],
            )
            ballots = dict(self._state.ballots)
            ballots[ballot.participant] = ballot
            self._state = process.IssueState(
                issue=self._state.issue, ballots=ballots
            )
        elif event.kind == "statement-added":
            cost = Money(p["cost_cents"]) if p.get("cost_cents") is not None else None
            self.graph.add_statement(
                p["text"],
                is_position=p.get("is_position", False),
                cost=cost,
                node_id=p["id"],
            )
        elif event.kind == "argument-added":
            self.graph.add_argument(
                p["premises"], p["conclusion"], p["attitude"], node_id=p["id"]
            )
        elif event.kind == "review-vote":
            key = (p["target"], p["kind"])
            case = self.reviews.get(key) or ReviewCase(target=p["target"], kind=p["kind"])
            self.reviews[key] = cast_review_vote(case, p["side"])

    # --- mutations --------------------------------------------------------

    def submit_proposal(
        self, text: str, cost: Money, author: ParticipantId, now: datetime
    ) -> Proposal:
        with self._lock:
            state, proposal = process.submit_proposal(
                self._state, text, cost, author, now
            )
            self.log.append(
                "proposal-added",
                now,
                {
                    "id": proposal.id,
                    "text": proposal.text,
                    "cost_cents": proposal.cost.cents,
                    "ordinal": proposal.ordinal,
                    "author": proposal.author,
                },
            )
            self._state = state
            self.graph.add_statement(
                proposal.text, is_position=True, cost=proposal.cost, node_id=proposal.id
            )
            return proposal

    def submit_ballot(
        self, participant: ParticipantId, preferences: list[str], now: datetime
    ) -> Ballot:
        with self._lock:
            digest = self.log.participant_digest(participant)
            state, ballot = process.submit_ballot(self._state, digest, preferences, now)
            self.log.append(
                "ballot-submitted",
                now,
                {
                    "participant": ballot.participant,
                    "preferences": list(ballot.preferences),
                    "sequence": ballot.sequence,
                },
            )
            self._state = state
            return ballot

    def edit_proposal_cost(
        self, proposal_id: str, new_cost: Money, now: datetime
    ) -> Proposal:
        with self._lock:
            state, proposal = process.edit_proposal_cost(
                self._state, proposal_id, new_cost, now
            )
            self.log.append(
                "proposal-edited",
                now,
                {"id": proposal.id, "cost_cents": proposal.cost.cents},
            )
            self._state = state
            node = self.graph.statements[proposal.id]
            self.graph.statements[proposal.id] = dc_replace(node, cost=proposal.cost)
            return proposal

    def remove_proposal(self, proposal_id: str, now: datetime) -> Proposal:
        with self._lock:
            state, proposal = process.remove_proposal(self._state, proposal_id, now)
            self.log.append("proposal-tombstoned", now, {"id": proposal.id})
            self._state = state
            return proposal

    def add_statement(self, text: str, now: datetime) -> str:
        with self._lock:
            node_id = self.graph.add_statement(text)
            self.log.append(
                "statement-added",
                now,
                {"id": node_id, "text": text, "is_position": False, "cost_cents": None},
            )
            return node_id

    def add_argument(
        self, premises: list[str], conclusion: str, attitude: str, now: datetime
    ) -> str:
        with self._lock:
            node_id = self.graph.add_argument(premises, conclusion, attitude)
            self.log.append(
                "argument-added",
                now,
                {
                    "id": node_id,
                    "premises": sorted(premises),
                    "conclusion": conclusion,
                    "attitude": attitude,
                },
            )
            return node_id

    def review_vote(self, target: str, kind: str, side: str, now: datetime) -> ReviewCase:
        with self._lock:
            key = (target, kind)
            case = self.reviews.get(key) or ReviewCase(target=target, kind=kind)
            updated = cast_review_vote(case, side)
            self.log.append(
                "review-vote", now, {"target": target, "kind": kind, "side": side}
            )
            self.reviews[key] = updated
            return updated

    def decide(self) -> Decision:
        state = self._state
        return decide(
            state.ballot_list(), state.issue.proposals, state.issue.budget_config
        )


# --- file formats ----------------------------------------------------------


def import_ballots(path) -> list[Ballot]:
    """One ballot per non-empty line, ids separated by tabs or spaces.

    Left-to-right order is rank 1..k. Participant ids are synthesized per
    line; the source rows carry no identity.
    """
    ballots = []
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            tokens = raw.split()
            if not tokens:
                continue
            for token in tokens:
                if not token.isdigit():
                    raise ParseError(path, lineno, f"not an integer id: {token!r}")
            if len(set(tokens)) != len(tokens):
                raise ParseError(path, lineno, "duplicate proposal id in ballot")
            ballots.append(
                Ballot(
                    participant=f"row-{len(ballots) + 1}",
                    preferences=tuple(tokens),
                )
            )
    return ballots


def export_ballots(ballots, path) -> None:
    """Inverse of import_ballots: one tab-separated preference list per line."""
    lines = []
    for b in ballots:
        prefs = b.preferences if isinstance(b, Ballot) else tuple(b)
        lines.append("\t".join(prefs))
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def import_proposals(path) -> list[Proposal]:
    """Tab-separated `<id> <text> <cost-euros>`, creation order = line order."""
    proposals = []
    seen = set()
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ParseError(
                    path, lineno, f"expected 3 tab-separated fields, got {len(fields)}"
                )
            pid, text, cost_text = fields
            if not pid.isdigit():
                raise ParseError(path, lineno, f"not an integer id: {pid!r}")
            if pid in seen:
                raise ParseError(path, lineno, f"duplicate proposal id {pid}")
            if not text.strip():
                raise ParseError(path, lineno, "empty proposal text")
            try:
                cost = Money.from_euros(cost_text)
            except ValueError as exc:
                raise ParseError(path, lineno, str(exc)) from exc
            seen.add(pid)
            proposals.append(
                Proposal(id=pid, text=text, cost=cost, ordinal=len(proposals) + 1)
            )
    return proposals


def _rank_header(r: int) -> str:
    if r % 100 in (11, 12, 13):
        return f"{r}th"
    return f"{r}{ {1: 'st', 2: 'nd', 3: 'rd'}.get(r % 10, 'th') }"


def render_tally(
    scoreboard: ScoreBoard,
    ranked: RankedList,
    winners: WinnerSet | None,
    costs: Mapping[str, Money],
    pretty: bool = False,
) -> str:
    """Tab-separated score table, one proposal per row in rank order.

    Columns: ID, Cost, one priority count per rank, Borda, Approval, Single,
    Top3, and a winner marker when a winner set is given. The footer row
    sums the priority columns (present only when anything was ranked).
    """
    n = scoreboard.n_max
    header = ["ID", "Cost"] + [_rank_header(r) for r in range(1, n + 1)]
    header += ["Borda", "Approval", "Single", "Top3"]
    if winners is not None:
        header.append("Winner")
    table = [header]
    winner_ids = set(winners.winners) if winners is not None else set()
    for entry in ranked.entries:
        row_data = scoreboard.rows[entry.proposal_id]
        row = [entry.proposal_id, costs[entry.proposal_id].euros()]
        row += [str(c) for c in row_data.priority_histogram]
        row += [
            str(row_data.borda),
            str(row_data.approval),
            str(row_data.single()),
            str(row_data.top_k(3)),
        ]
        if winners is not None:
            row.append("*" if entry.proposal_id in winner_ids else "")
        table.append(row)
    if n > 0:
        footer = ["", ""] + [str(s) for s in scoreboard.column_sums()]
        footer += [""] * (len(header) - len(footer))
        table.append(footer)
    if pretty:
        widths = [max(len(row[i]) for row in table) for i in range(len(header))]
        lines = [
            "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
            for row in table
        ]
    else:
        lines = ["\t".join(row) for row in table]
    return "\n".join(lines) + "\n"


def export_tally(
    scoreboard: ScoreBoard,
    ranked: RankedList,
    winners: WinnerSet | None,
    costs: Mapping[str, Money],
    path,
) -> None:
    Path(path).write_text(
        render_tally(scoreboard, ranked, winners, costs), encoding="utf-8"
    )
