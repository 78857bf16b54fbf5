"""Argumentation graph attached to an issue.

Statements are atomic assertions; positions are statements that double as
proposals (and carry a cost in decision issues). Arguments are directed
edges from a non-empty premise set to a conclusion, which is either a
statement or another argument, with a positive or negative attitude.

From that structure four relation labels are derived:

  support    positive attitude toward a statement
  undermine  negative attitude toward a statement used as someone's premise
  undercut   negative attitude toward an argument itself
  rebut      negative attitude toward a statement some other argument
             supports as its conclusion (strictly opposite attitudes,
             identical conclusion)

An argument with a positive attitude toward another argument is rejected at
insertion; the relation stays out of the model on purpose, which keeps
classification total over everything the graph can hold.

The graph is directed and expected to be acyclic, but insertion never
enforces acyclicity; `validate_acyclic` reports cycles on demand.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Iterable

import networkx as nx

from .model import DomainError, Money


class GraphError(DomainError):
    """Violation of the argumentation-graph rules."""


ATTITUDES = ("positive", "negative")
REVIEW_KINDS = ("delete", "spelling", "edit-request", "split", "merge")

#: A review case is decided once either side reaches this many votes...
REVIEW_VOTE_CAP = 5
#: ...or leads by this margin.
REVIEW_LEAD = 3


@dataclass(frozen=True)
class Statement:
    id: str
    text: str
    is_position: bool = False
    cost: Money | None = None


@dataclass(frozen=True)
class Argument:
    id: str
    premises: frozenset[str]
    conclusion: str
    attitude: str  # "positive" | "negative"


@dataclass(frozen=True)
class ReviewCase:
    """A reported change to the graph, decided by distributed voting."""

    target: str
    kind: str
    pro_votes: int = 0
    con_votes: int = 0
    state: str = "pending"  # pending | accepted | rejected

    def __post_init__(self):
        if self.kind not in REVIEW_KINDS:
            raise ValueError(f"unknown review kind {self.kind!r}")


def cast_review_vote(case: ReviewCase, side: str) -> ReviewCase:
    """Count one vote and decide the case if a threshold is now met.

    Decides as soon as either side reaches REVIEW_VOTE_CAP votes or leads by
    REVIEW_LEAD; the leading side wins. Decided cases are terminal.
    """
    if side not in ("pro", "con"):
        raise ValueError(f"side must be 'pro' or 'con', got {side!r}")
    if case.state != "pending":
        raise GraphError(
            "vote-on-decided-case", f"review case is already {case.state}"
        )
    pro = case.pro_votes + (side == "pro")
    con = case.con_votes + (side == "con")
    state = "pending"
    if (max(pro, con) >= REVIEW_VOTE_CAP or abs(pro - con) >= REVIEW_LEAD) and pro != con:
        state = "accepted" if pro > con else "rejected"
    return replace(case, pro_votes=pro, con_votes=con, state=state)


class ArgumentGraph:
    """Mutable node/edge container; writers must serialize externally."""

    def __init__(self, decision_issue: bool = False):
        self.decision_issue = decision_issue
        self.statements: dict[str, Statement] = {}
        self.arguments: dict[str, Argument] = {}
        self._counters: dict[str, int] = {}

    def _fresh_id(self, prefix: str) -> str:
        while True:
            self._counters[prefix] = self._counters.get(prefix, 0) + 1
            node_id = f"{prefix}{self._counters[prefix]}"
            if node_id not in self.statements and node_id not in self.arguments:
                return node_id

    def _register(self, node_id: str) -> None:
        if node_id in self.statements or node_id in self.arguments:
            raise GraphError("duplicate-node", f"node id {node_id} already exists")

    def add_statement(
        self,
        text: str,
        is_position: bool = False,
        cost: Money | None = None,
        node_id: str | None = None,
    ) -> str:
        if not text.strip():
            raise GraphError("empty-text", "statement text must not be empty")
        if cost is not None and not is_position:
            raise GraphError(
                "cost-on-plain-statement", "only positions may carry a cost"
            )
        if self.decision_issue and is_position and cost is None:
            raise GraphError(
                "position-without-cost",
                "positions in a decision issue must carry a cost",
            )
        node_id = node_id or self._fresh_id("s")
        self._register(node_id)
        self.statements[node_id] = Statement(
            id=node_id, text=text, is_position=is_position, cost=cost
        )
        return node_id

    def add_argument(
        self,
        premises: Iterable[str],
        conclusion: str,
        attitude: str,
        node_id: str | None = None,
    ) -> str:
        if attitude not in ATTITUDES:
            raise GraphError("bad-attitude", f"attitude must be one of {ATTITUDES}")
        premise_set = frozenset(str(p) for p in premises)
        if not premise_set:
            raise GraphError("empty-premises", "an argument needs at least one premise")
        for pid in premise_set:
            if pid not in self.statements:
                raise GraphError(
                    "unknown-node", f"premise {pid} is not an existing statement"
                )
        if conclusion in self.arguments:
            if attitude == "positive":
                raise GraphError(
                    "unsupported-relation",
                    "a positive attitude toward an argument is not representable",
                )
        elif conclusion not in self.statements:
            raise GraphError("unknown-node", f"conclusion {conclusion} does not exist")
        if conclusion in premise_set:
            raise GraphError(
                "conclusion-in-premises",
                "an argument may not conclude one of its own premises",
            )
        node_id = node_id or self._fresh_id("a")
        self._register(node_id)
        self.arguments[node_id] = Argument(
            id=node_id, premises=premise_set, conclusion=conclusion, attitude=attitude
        )
        return node_id

    def classify_relation(self, argument_id: str) -> tuple[str, ...]:
        """Label set for one argument; structural label first, rebut appended.

        A negative argument toward a statement that is neither anyone's
        premise nor opposed by a supporting argument gets the empty set: it
        is a bare attack with no finer name.
        """
        arg = self.arguments.get(argument_id)
        if arg is None:
            raise GraphError("unknown-node", f"no argument {argument_id}")
        if arg.conclusion in self.arguments:
            return ("undercut",)
        if arg.attitude == "positive":
            return ("support",)
        labels = []
        if any(arg.conclusion in other.premises for other in self.arguments.values()):
            labels.append("undermine")
        if any(
            other.id != arg.id
            and other.attitude == "positive"
            and other.conclusion == arg.conclusion
            for other in self.arguments.values()
        ):
            labels.append("rebut")
        return tuple(labels)

    def position_arguments(
        self, position_id: str, limit: int | None = None, seed: int = 0
    ) -> tuple[list[Argument], list[Argument]]:
        """Pro and contra arguments one layer deep on a position.

        Only arguments concluding the position itself count. Each list is
        shuffled by a generator seeded from `seed` (deterministic per seed)
        and truncated to `limit`; no limit means the full lists.
        """
        statement = self.statements.get(position_id)
        if statement is None or not statement.is_position:
            raise GraphError("unknown-node", f"no position {position_id}")
        pro = [a for a in self.arguments.values() if a.conclusion == position_id and a.attitude == "positive"]
        con = [a for a in self.arguments.values() if a.conclusion == position_id and a.attitude == "negative"]
        random.Random(f"{seed}/pro").shuffle(pro)
        random.Random(f"{seed}/con").shuffle(con)
        if limit is not None:
            pro, con = pro[:limit], con[:limit]
        return pro, con

    def _edges(self) -> list[tuple[str, str]]:
        # premise -> argument -> conclusion
        edges = []
        for arg in self.arguments.values():
            for premise in sorted(arg.premises):
                edges.append((premise, arg.id))
            edges.append((arg.id, arg.conclusion))
        return edges

    def validate_acyclic(self) -> list[list[str]]:
        """Every directed cycle over premise/conclusion edges; [] means ok."""
        digraph = nx.DiGraph(self._edges())
        return [list(cycle) for cycle in nx.simple_cycles(digraph)]

    # --- line-oriented text format -------------------------------------
    #
    # S <id> <is_position:0|1> <cost-or-"-"> <text>
    # A <id> <attitude:+|-> <conclusion-id> <premise-id>[,<premise-id>...]

    def to_lines(self) -> str:
        lines = []
        for s in self.statements.values():
            cost = s.cost.euros() if s.cost is not None else "-"
            lines.append(f"S\t{s.id}\t{int(s.is_position)}\t{cost}\t{s.text}")
        for a in self.arguments.values():
            sign = "+" if a.attitude == "positive" else "-"
            premises = ",".join(sorted(a.premises))
            lines.append(f"A\t{a.id}\t{sign}\t{a.conclusion}\t{premises}")
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_lines(cls, text: str, decision_issue: bool = False) -> "ArgumentGraph":
        graph = cls(decision_issue=decision_issue)
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            kind, _, rest = line.partition("\t")
            try:
                if kind == "S":
                    node_id, flag, cost_text, stmt_text = rest.split("\t", 3)
                    cost = None if cost_text == "-" else Money.from_euros(cost_text)
                    graph.add_statement(
                        stmt_text, is_position=flag == "1", cost=cost, node_id=node_id
                    )
                elif kind == "A":
                    node_id, sign, conclusion, premises = rest.split("\t", 3)
                    if sign not in ("+", "-"):
                        raise ValueError(f"attitude must be + or -, got {sign!r}")
                    graph.add_argument(
                        premises.split(","),
                        conclusion,
                        "positive" if sign == "+" else "negative",
                        node_id=node_id,
                    )
                else:
                    raise ValueError(f"unknown record kind {kind!r}")
            except (ValueError, GraphError) as exc:
                raise GraphError(
                    "parse-error", f"line {lineno}: {exc}", line=lineno
                ) from exc
        return graph
