#!/usr/bin/env python3
"""Replay the bundled pilot data end to end.

Prints the full score table with winner flags for the 20,000 euro budget,
then the same tally after restricting every ballot to the budget. Output is
the plain TSV the CLI produces; pipe through `column -t` for alignment.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from budgetvote.model import Money
from budgetvote.scoring import budget_filter_ballots, build_scoreboard
from budgetvote.selection import rank, select_winners
from budgetvote.store import import_ballots, import_proposals, render_tally

DATA = Path(__file__).resolve().parent.parent / "data"
BUDGET = Money.from_euros(20_000)


def tabulate(ballots, proposals, title):
    costs = {p.id: p.cost for p in proposals}
    board = build_scoreboard(
        [b if isinstance(b, tuple) else b.preferences for b in ballots],
        [p.id for p in proposals],
    )
    ranking = rank(board, proposals)
    winners = select_winners(ranking, costs, BUDGET)
    print(f"# {title}")
    print(render_tally(board, ranking, winners, costs, pretty=True))
    print(
        f"winners: {', '.join(winners.winners)} | "
        f"spent {winners.spent.euros()} | leftover {winners.leftover.euros()}\n"
    )


def main():
    proposals = import_proposals(DATA / "proposals.tsv")
    ballots = import_ballots(DATA / "ballots.tsv")
    costs = {p.id: p.cost for p in proposals}

    tabulate(ballots, proposals, f"{len(ballots)} ballots, unrestricted")
    filtered = budget_filter_ballots(ballots, costs, BUDGET)
    tabulate(filtered, proposals, "same ballots, restricted to the budget")


if __name__ == "__main__":
    main()
