from pathlib import Path

import pytest

from budgetvote.model import Ballot, BudgetConfig, Money, Proposal
from budgetvote.store import import_ballots, import_proposals

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

PROPOSALS_FILE = DATA_DIR / "proposals.tsv"
BALLOTS_FILE = DATA_DIR / "ballots.tsv"
GRAPH_FILE = DATA_DIR / "demo_graph.tsv"

# Frozen reference tallies for the bundled experiment data (142 ballots,
# eight proposals, 20,000 euro budget). Verified against the published
# distribution before freezing.
EXPERIMENT_BORDA = {
    "790": 730, "821": 475, "823": 449, "774": 368,
    "746": 331, "748": 321, "755": 210, "851": 187,
}
EXPERIMENT_APPROVAL = {
    "790": 105, "821": 74, "823": 69, "774": 61,
    "746": 55, "748": 47, "755": 39, "851": 35,
}
EXPERIMENT_SINGLE = {
    "790": 40, "821": 17, "823": 25, "774": 14,
    "746": 12, "748": 25, "755": 5, "851": 4,
}
EXPERIMENT_TOP3 = {
    "790": 95, "821": 61, "823": 55, "774": 38,
    "746": 33, "748": 40, "755": 20, "851": 18,
}
EXPERIMENT_COLUMN_SUMS = (142, 124, 94, 62, 32, 12, 10, 9)
EXPERIMENT_RANKING = ("790", "821", "823", "774", "746", "748", "755", "851")
EXPERIMENT_WINNERS = ("790", "823", "774", "746", "755")

# Same data after restricting every ballot to a 20,000 euro running total.
FILTERED_BORDA = {
    "790": 336, "821": 85, "823": 227, "774": 187,
    "746": 163, "748": 125, "755": 94, "851": 81,
}
FILTERED_APPROVAL = {
    "790": 78, "821": 17, "823": 58, "774": 54,
    "746": 46, "748": 25, "755": 31, "851": 27,
}
FILTERED_TOP3 = {
    "790": 74, "821": 17, "823": 48, "774": 43,
    "746": 35, "748": 25, "755": 20, "851": 17,
}
FILTERED_COLUMN_SUMS = (142, 79, 58, 41, 16)


@pytest.fixture(scope="session")
def experiment_proposals():
    return import_proposals(PROPOSALS_FILE)


@pytest.fixture(scope="session")
def experiment_ballots():
    return import_ballots(BALLOTS_FILE)


@pytest.fixture(scope="session")
def experiment_costs(experiment_proposals):
    return {p.id: p.cost for p in experiment_proposals}


# The three-colleague walkthrough: 10,000 euro budget, three proposals.
OFFICE_PROPOSALS = (
    Proposal("hackathon", "host a hackathon", Money.from_euros(4_000), ordinal=1),
    Proposal("computer-lab", "modernize the computer lab", Money.from_euros(7_000), ordinal=2),
    Proposal("water-cooler", "water cooler for the entrance", Money.from_euros(2_000), ordinal=3),
)
OFFICE_BALLOTS_THREE = (
    Ballot("christian", ("water-cooler", "hackathon")),
    Ballot("alexander", ("computer-lab", "hackathon", "water-cooler")),
    Ballot("markus", ("hackathon", "computer-lab")),
)
OFFICE_BALLOTS_FOUR = OFFICE_BALLOTS_THREE + (
    Ballot("martin", ("computer-lab", "water-cooler", "hackathon")),
)
OFFICE_CONFIG = BudgetConfig(budget=Money.from_euros(10_000))
