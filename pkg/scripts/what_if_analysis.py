#!/usr/bin/env python3
"""What-if experiments on the bundled pilot data.

1. Rank the proposals under every scorer (decide rule, approval, single
   vote, top-k for small k) and show where the orders diverge.
2. Sweep the cost of the most expensive runner-up downward to find the
   break-even point where it displaces cheaper winners.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from budgetvote.model import BudgetConfig, Money, Proposal
from budgetvote.selection import decide
from budgetvote.scoring import approval_score, partial_borda, single_vote, top_k_approval
from budgetvote.store import import_ballots, import_proposals

DATA = Path(__file__).resolve().parent.parent / "data"
BUDGET = Money.from_euros(20_000)


def ordered(scores):
    return [pid for pid, _ in sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))]


def main():
    proposals = import_proposals(DATA / "proposals.tsv")
    ballots = import_ballots(DATA / "ballots.tsv")

    print("# Ranking per scoring method")
    methods = {
        "borda": partial_borda(ballots),
        "approval": approval_score(ballots),
        "single": single_vote(ballots),
        "top-3": top_k_approval(ballots, 3),
        "top-2": top_k_approval(ballots, 2),
    }
    for name, scores in methods.items():
        print(f"{name:>8}: {'  '.join(ordered(scores))}")
    top2, top3 = methods["top-2"], methods["top-3"]
    print(
        f"\nnote: top-2 puts 851 ({top2['851']}) over 755 ({top2['755']}), "
        f"while top-3 has 755 ({top3['755']}) over 851 ({top3['851']})\n"
    )

    print("# Cost sweep for proposal 821 (cheaper estimates displace winners)")
    config = BudgetConfig(budget=BUDGET)
    baseline = decide(ballots, proposals, config).winners.winners
    previous = baseline
    for euros in range(20_000, 0, -50):
        swept = [
            p if p.id != "821" else Proposal(p.id, p.text, Money.from_euros(euros), p.ordinal)
            for p in proposals
        ]
        winners = decide(ballots, swept, config).winners.winners
        if winners != previous:
            print(f"  at {euros:>6} euros: {', '.join(winners)}")
            previous = winners
    if previous == baseline:
        print("  winner set never changes")


if __name__ == "__main__":
    main()
