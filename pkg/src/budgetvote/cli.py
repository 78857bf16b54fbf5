"""Command line interface: offline tabulation, the built-in walkthrough
example, graph checking, and the HTTP service entry point.

Exit codes: 0 success, 1 domain violation (cycles, self-test failure),
2 unusable input (parse errors, bad flags, bad config).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .arggraph import ArgumentGraph, GraphError
from .model import (
    Ballot,
    BudgetConfig,
    DomainError,
    Issue,
    Money,
    Proposal,
    parse_rfc3339,
)
from .process import PhaseSchedule
from .scoring import (
    approval_score,
    budget_filter_ballots,
    build_scoreboard,
    partial_borda,
    single_vote,
    top_k_approval,
)
from .selection import decide, rank, select_winners
from .store import ParseError, import_ballots, import_proposals, render_tally

METHODS = ("borda", "approval", "single", "topk")

CONFIG_KEYS = (
    "id",
    "title",
    "listen",
    "budget",
    "cost_min",
    "cost_max",
    "proposals_close_at",
    "voting_opens_at",
    "voting_closes_at",
    "results_always_visible",
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="budgetvote",
        description="Budget decisions from ranked approval ballots",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    tab = sub.add_parser("tabulate", help="score a ballot file and print the table")
    tab.add_argument("--proposals", required=True, help="proposal TSV (id, text, cost)")
    tab.add_argument("--ballots", required=True, help="ballot file, one per line")
    tab.add_argument("--budget", help="total budget in euros; enables winner flags")
    tab.add_argument("--method", choices=METHODS, help="score a single method instead")
    tab.add_argument("--k", type=int, help="truncation depth for --method topk")
    tab.add_argument(
        "--budget-filter",
        metavar="EUROS",
        help="restrict each ballot to entries that cumulatively fit this budget",
    )
    tab.add_argument("--out", help="also write the table to this file")
    tab.add_argument("--pretty", action="store_true", help="aligned human output")

    sub.add_parser("example", help="run the built-in walkthrough and self-check it")

    graph = sub.add_parser("graph", help="argumentation graph tools")
    graph_sub = graph.add_subparsers(dest="graph_command", required=True)
    validate = graph_sub.add_parser("validate", help="classify relations, find cycles")
    validate.add_argument("--file", required=True, help="graph file (S/A records)")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--config", required=True, help="issue configuration file")
    serve.add_argument("--store", required=True, help="directory for the event log")
    serve.add_argument("--tokens", required=True, help="token -> participant file")
    serve.add_argument("--listen", help="host:port (overrides config)", default=None)

    return parser


def cmd_tabulate(args) -> int:
    try:
        proposals = import_proposals(args.proposals)
        ballots = import_ballots(args.ballots)
    except ParseError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return 2
    if args.method == "topk" and args.k is None:
        print("error: --method topk requires --k", file=sys.stderr)
        return 2
    if args.k is not None and args.method != "topk":
        print("error: --k only applies to --method topk", file=sys.stderr)
        return 2

    costs = {p.id: p.cost for p in proposals}
    known = {p.id for p in proposals}
    for b in ballots:
        missing = [pid for pid in b.preferences if pid not in known]
        if missing:
            print(
                f"error: ballot references unknown proposal {missing[0]}",
                file=sys.stderr,
            )
            return 1

    profile: list = ballots
    summary = ""
    try:
        if args.budget_filter is not None:
            profile = budget_filter_ballots(
                ballots, costs, Money.from_euros(args.budget_filter)
            )

        if args.method:
            output = _method_table(args.method, args.k, profile, proposals)
        else:
            scoreboard = build_scoreboard(
                [b.preferences if isinstance(b, Ballot) else b for b in profile],
                [p.id for p in proposals],
            )
            ranking = rank(scoreboard, proposals)
            winners = None
            if args.budget is not None:
                winners = select_winners(
                    ranking, costs, Money.from_euros(args.budget)
                )
            output = render_tally(scoreboard, ranking, winners, costs, pretty=args.pretty)
            if winners is not None:
                summary = (
                    f"winners\t{','.join(winners.winners)}\t"
                    f"spent\t{winners.spent.euros()}\t"
                    f"leftover\t{winners.leftover.euros()}\n"
                )
    except (ValueError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    sys.stdout.write(output + summary)
    if args.out:
        Path(args.out).write_text(output, encoding="utf-8")
    return 0


def _method_table(method: str, k: int | None, ballots, proposals) -> str:
    if method == "borda":
        scores = partial_borda(ballots)
    elif method == "approval":
        scores = approval_score(ballots)
    elif method == "single":
        scores = single_vote(ballots)
    else:
        scores = top_k_approval(ballots, k)
    ordinals = {p.id: p.ordinal for p in proposals}
    costs = {p.id: p.cost for p in proposals}
    column = method if method != "topk" else f"top{k}"
    rows = sorted(
        ((p.id, scores.get(p.id, 0)) for p in proposals),
        key=lambda item: (-item[1], ordinals[item[0]]),
    )
    lines = [f"ID\tCost\t{column}"]
    lines += [f"{pid}\t{costs[pid].euros()}\t{score}" for pid, score in rows]
    return "\n".join(lines) + "\n"


# The walkthrough fixture: three colleagues vote on three office proposals
# with a 10,000 euro budget, then a fourth voter forces the approval
# tiebreak. Doubles as a permanent self-check of the whole pipeline.
EXAMPLE_BUDGET = Money.from_euros(10_000)
EXAMPLE_PROPOSALS = (
    Proposal("hackathon", "host a hackathon", Money.from_euros(4_000), ordinal=1),
    Proposal("computer-lab", "modernize the computer lab", Money.from_euros(7_000), ordinal=2),
    Proposal("water-cooler", "water cooler for the entrance", Money.from_euros(2_000), ordinal=3),
)
EXAMPLE_BALLOTS_3 = (
    Ballot("christian", ("water-cooler", "hackathon")),
    Ballot("alexander", ("computer-lab", "hackathon", "water-cooler")),
    Ballot("markus", ("hackathon", "computer-lab")),
)
EXAMPLE_BALLOTS_4 = EXAMPLE_BALLOTS_3 + (
    Ballot("martin", ("computer-lab", "water-cooler", "hackathon")),
)


def cmd_example() -> int:
    config = BudgetConfig(budget=EXAMPLE_BUDGET)
    failures = []

    first = decide(EXAMPLE_BALLOTS_3, EXAMPLE_PROPOSALS, config)
    print("Three participants, budget 10000:")
    for entry in first.ranking.entries:
        print(f"  {entry.proposal_id}: {entry.borda} points, {entry.approval} approvals")
    print(f"  winners: {', '.join(first.winners.winners)}"
          f" (spent {first.winners.spent.euros()}, leftover {first.winners.leftover.euros()})")
    scores = {e.proposal_id: e.borda for e in first.ranking.entries}
    if scores != {"hackathon": 7, "computer-lab": 5, "water-cooler": 4}:
        failures.append(f"three-participant scores off: {scores}")
    if first.winners.winners != ("hackathon", "water-cooler"):
        failures.append(f"three-participant winners off: {first.winners.winners}")
    if first.winners.leftover != Money.from_euros(4_000):
        failures.append(f"three-participant leftover off: {first.winners.leftover}")

    second = decide(EXAMPLE_BALLOTS_4, EXAMPLE_PROPOSALS, config)
    print("A fourth participant joins:")
    for entry in second.ranking.entries:
        print(f"  {entry.proposal_id}: {entry.borda} points, {entry.approval} approvals")
    print(f"  winners: {', '.join(second.winners.winners)}"
          f" (spent {second.winners.spent.euros()}, leftover {second.winners.leftover.euros()})")
    by_id = {e.proposal_id: e for e in second.ranking.entries}
    if not (by_id["hackathon"].borda == by_id["computer-lab"].borda == 8):
        failures.append("four-participant tie not at 8 points each")
    if by_id["hackathon"].approval != 4 or by_id["computer-lab"].approval != 3:
        failures.append("four-participant approvals off")
    if second.ranking.ids()[0] != "hackathon":
        failures.append("approval tiebreak did not favor the hackathon")
    if second.winners.winners != ("hackathon", "water-cooler"):
        failures.append(f"four-participant winners off: {second.winners.winners}")

    if failures:
        for f in failures:
            print(f"self-test FAILED: {f}", file=sys.stderr)
        return 1
    print("self-test ok")
    return 0


def cmd_graph_validate(args) -> int:
    path = Path(args.file)
    if not path.exists():
        print(f"error: no such file {path}", file=sys.stderr)
        return 2
    try:
        graph = ArgumentGraph.from_lines(path.read_text(encoding="utf-8"))
    except GraphError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return 2
    counts = {"support": 0, "rebut": 0, "undermine": 0, "undercut": 0}
    for arg_id in graph.arguments:
        for label in graph.classify_relation(arg_id):
            counts[label] += 1
    print(
        f"statements\t{len(graph.statements)}\n"
        f"arguments\t{len(graph.arguments)}\n"
        f"support\t{counts['support']}\n"
        f"rebut\t{counts['rebut']}\n"
        f"undermine\t{counts['undermine']}\n"
        f"undercut\t{counts['undercut']}"
    )
    cycles = graph.validate_acyclic()
    if cycles:
        for cycle in cycles:
            print("cycle\t" + " -> ".join(cycle))
        return 1
    print("acyclic")
    return 0


def load_issue_config(path) -> tuple[Issue, str]:
    """Parse the `key = value` issue configuration; returns (issue, listen)."""
    values: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise ParseError(path, lineno, f"expected `key = value`, got {line!r}")
        if key not in CONFIG_KEYS:
            raise ParseError(path, lineno, f"unknown configuration key {key!r}")
        values[key] = value.strip()
    if "budget" not in values:
        raise ParseError(path, 0, "missing required key 'budget'")

    def money(key: str) -> Money | None:
        return Money.from_euros(values[key]) if key in values else None

    def timestamp(key: str):
        return parse_rfc3339(values[key]) if key in values else None

    try:
        config = BudgetConfig(
            budget=Money.from_euros(values["budget"]),
            cost_min=money("cost_min") or Money(0),
            cost_max=money("cost_max"),
        )
        schedule = PhaseSchedule(
            proposals_close_at=timestamp("proposals_close_at"),
            voting_opens_at=timestamp("voting_opens_at"),
            voting_closes_at=timestamp("voting_closes_at"),
            results_always_visible=values.get("results_always_visible", "false").lower()
            in ("true", "yes", "1"),
        )
    except ValueError as exc:
        raise ParseError(path, 0, str(exc)) from exc
    issue = Issue(
        id=values.get("id", "issue-1"),
        title=values.get("title", "Budget decision"),
        budget_config=config,
        schedule=schedule,
    )
    return issue, values.get("listen", "127.0.0.1:8080")


def load_tokens(path) -> dict[str, str]:
    """Token file: `token participant-id` per line, # comments allowed."""
    tokens = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(path, lineno, "expected `token participant-id`")
        tokens[parts[0]] = parts[1]
    return tokens


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app
    from .store import IssueStore

    try:
        issue, listen = load_issue_config(args.config)
        tokens = load_tokens(args.tokens)
    except (ParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    listen = args.listen or listen
    host, _, port = listen.rpartition(":")
    store = IssueStore(args.store, issue)
    app = create_app(store, tokens)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "tabulate":
        return cmd_tabulate(args)
    if args.command == "example":
        return cmd_example()
    if args.command == "graph":
        return cmd_graph_validate(args)
    if args.command == "serve":
        return cmd_serve(args)
    return 2


if __name__ == "__main__":
    sys.exit(main())
