from fractions import Fraction

import pytest

from budgetvote.model import Ballot, Money, ValidationError
from budgetvote.scoring import (
    approval_score,
    budget_filter_ballots,
    build_scoreboard,
    classic_borda,
    max_preferences,
    partial_borda,
    single_vote,
    top_k_approval,
)

from conftest import (
    EXPERIMENT_APPROVAL,
    EXPERIMENT_BORDA,
    EXPERIMENT_SINGLE,
    EXPERIMENT_TOP3,
    FILTERED_APPROVAL,
    FILTERED_BORDA,
    FILTERED_TOP3,
    OFFICE_BALLOTS_FOUR,
    OFFICE_BALLOTS_THREE,
)


class TestMaxPreferences:
    def test_office_walkthrough(self):
        assert max_preferences(OFFICE_BALLOTS_THREE) == 3

    def test_experiment_data(self, experiment_ballots):
        assert max_preferences(experiment_ballots) == 8

    def test_no_ballots(self):
        assert max_preferences([]) == 0
        assert max_preferences([Ballot("a", ()), Ballot("b", ())]) == 0


class TestPartialBorda:
    def test_three_participants(self):
        assert partial_borda(OFFICE_BALLOTS_THREE) == {
            "hackathon": 7,
            "computer-lab": 5,
            "water-cooler": 4,
        }

    def test_four_participants(self):
        assert partial_borda(OFFICE_BALLOTS_FOUR) == {
            "computer-lab": 8,
            "hackathon": 8,
            "water-cooler": 6,
        }

    def test_experiment_data(self, experiment_ballots):
        assert partial_borda(experiment_ballots) == EXPERIMENT_BORDA

    def test_unranked_scores_nothing(self):
        scores = partial_borda([["a", "b"], ["a"]])
        assert scores == {"a": 4, "b": 1}
        assert scores.get("c", 0) == 0


class TestApprovalScore:
    def test_four_participants(self):
        assert approval_score(OFFICE_BALLOTS_FOUR) == {
            "hackathon": 4,
            "computer-lab": 3,
            "water-cooler": 3,
        }

    def test_experiment_data(self, experiment_ballots):
        assert approval_score(experiment_ballots) == EXPERIMENT_APPROVAL

    def test_no_ballots(self):
        assert approval_score([]) == {}


class TestSingleVote:
    def test_experiment_data(self, experiment_ballots):
        assert single_vote(experiment_ballots) == EXPERIMENT_SINGLE

    def test_vote_splitting_scenario(self):
        # Nine voters, the D camp votes as a bloc: D tops the count even
        # though two thirds would prefer anyone else.
        ballots = [["A"], ["A"], ["B"], ["B"], ["C"], ["C"], ["D"], ["D"], ["D"]]
        scores = single_vote(ballots)
        assert scores == {"A": 2, "B": 2, "C": 2, "D": 3}
        assert max(scores, key=scores.get) == "D"

    def test_single_ballot(self):
        assert single_vote([["X"]]) == {"X": 1}


class TestTopKApproval:
    def test_top3_experiment_data(self, experiment_ballots):
        assert top_k_approval(experiment_ballots, 3) == EXPERIMENT_TOP3

    def test_k_beyond_longest_ballot_is_plain_approval(self, experiment_ballots):
        assert top_k_approval(experiment_ballots, 8) == approval_score(
            experiment_ballots
        )
        assert top_k_approval(experiment_ballots, 50) == approval_score(
            experiment_ballots
        )

    def test_top2_reverses_two_proposals(self, experiment_ballots):
        # 755 collects much of its approval at third preference; cutting at
        # two flips its order against 851.
        top2 = top_k_approval(experiment_ballots, 2)
        assert top2["851"] == 11
        assert top2["755"] == 8

    def test_k_must_be_positive(self):
        with pytest.raises(ValueError):
            top_k_approval([], 0)


class TestClassicBorda:
    def test_two_choices_n_to_1(self):
        assert classic_borda([["A", "B"]], "n_to_1") == {"A": 2, "B": 1}

    def test_two_choices_zero_based(self):
        assert classic_borda([["A", "B"]], "zero_based") == {"A": 1, "B": 0}

    def test_dowdall_harmonic(self):
        scores = classic_borda([["A", "B", "C"]], "dowdall")
        assert scores == {"A": 1, "B": Fraction(1, 2), "C": Fraction(1, 3)}

    def test_dowdall_sums_exactly(self):
        scores = classic_borda([["A", "B", "C"], ["B", "C", "A"]], "dowdall")
        assert scores["A"] == Fraction(4, 3)
        assert scores["B"] == Fraction(3, 2)
        assert scores["C"] == Fraction(5, 6)

    def test_requires_full_permutations(self):
        with pytest.raises(ValueError):
            classic_borda([["A", "B"], ["A"]], "n_to_1")
        with pytest.raises(ValueError):
            classic_borda([["A", "B"], ["A", "C"]], "n_to_1")

    def test_variant_difference_is_ranking_count(self):
        rankings = [["A", "B", "C"], ["C", "B", "A"], ["B", "A", "C"]]
        high = classic_borda(rankings, "n_to_1")
        low = classic_borda(rankings, "zero_based")
        assert all(high[c] - low[c] == len(rankings) for c in high)

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            classic_borda([["A"]], "quota")


class TestBudgetFilter:
    BUDGET = Money.from_euros(20_000)

    def test_first_entry_eats_the_budget(self, experiment_costs):
        # 748 costs the full budget: everything after it is dropped.
        filtered = budget_filter_ballots(
            [["748", "823", "774", "790", "821"]], experiment_costs, self.BUDGET
        )
        assert filtered == [("748",)]

    def test_feasible_ballot_unchanged(self, experiment_costs):
        ballot = ["823", "851", "790", "774"]  # 15,150 total
        filtered = budget_filter_ballots([ballot], experiment_costs, self.BUDGET)
        assert filtered == [tuple(ballot)]

    def test_skip_keeps_scanning(self, experiment_costs):
        # 746 + 851 leave room; the two 20,000 entries are skipped, then the
        # cheap tail is kept.
        filtered = budget_filter_ballots(
            [["746", "851", "748", "821", "774", "823", "790", "755"]],
            experiment_costs,
            self.BUDGET,
        )
        assert filtered == [("746", "851", "774", "823", "790")]

    def test_experiment_replay(self, experiment_ballots, experiment_costs):
        filtered = budget_filter_ballots(
            experiment_ballots, experiment_costs, self.BUDGET
        )
        assert max_preferences(filtered) == 5
        assert partial_borda(filtered) == FILTERED_BORDA
        assert approval_score(filtered) == FILTERED_APPROVAL
        assert top_k_approval(filtered, 3) == FILTERED_TOP3

    def test_rejects_entry_beyond_whole_budget(self):
        costs = {"x": Money.from_euros(30_000)}
        with pytest.raises(ValueError):
            budget_filter_ballots([["x"]], costs, self.BUDGET)

    def test_rejects_unknown_cost(self):
        with pytest.raises(ValueError):
            budget_filter_ballots([["x"]], {}, self.BUDGET)


class TestScoreBoard:
    def test_matches_direct_scorers(self, experiment_ballots, experiment_proposals):
        board = build_scoreboard(
            experiment_ballots, [p.id for p in experiment_proposals]
        )
        assert board.n_max == 8
        borda = partial_borda(experiment_ballots)
        approval = approval_score(experiment_ballots)
        for pid, row in board.rows.items():
            assert row.borda == borda.get(pid, 0)
            assert row.approval == approval.get(pid, 0)
            assert row.borda == sum(
                count * (board.n_max - r)
                for r, count in enumerate(row.priority_histogram)
            )

    def test_first_column_counts_nonempty_ballots(self, experiment_ballots):
        board = build_scoreboard(
            experiment_ballots, approval_score(experiment_ballots).keys()
        )
        first_column = sum(row.priority_histogram[0] for row in board.rows.values())
        assert first_column == sum(1 for b in experiment_ballots if b.preferences)

    def test_unranked_proposal_gets_zero_row(self):
        board = build_scoreboard([["a"]], ["a", "b"])
        assert board.rows["b"].borda == 0
        assert board.rows["b"].approval == 0
        assert board.rows["b"].priority_histogram == (0,)

    def test_unknown_ballot_reference_rejected(self):
        with pytest.raises(ValidationError):
            build_scoreboard([["zzz"]], ["a"])

    def test_single_and_topk_derived_from_histogram(self, experiment_ballots):
        board = build_scoreboard(
            experiment_ballots, approval_score(experiment_ballots).keys()
        )
        single = single_vote(experiment_ballots)
        top3 = top_k_approval(experiment_ballots, 3)
        for pid, row in board.rows.items():
            assert row.single() == single.get(pid, 0)
            assert row.top_k(3) == top3.get(pid, 0)
