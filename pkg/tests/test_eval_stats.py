import pytest
from hypothesis import given, settings, strategies as st

from storyforge.errors import InvalidRequestError
from storyforge.evalharness import (
    Granularity,
    ModerationRecord,
    ScoreRecord,
    as_percent,
    criterion_means,
    false_positive_rate,
    pairwise_rates,
    round2,
)


def records_for(subject: str, grid: dict) -> list[ScoreRecord]:
    """grid: {(item, rater, criterion): score}"""
    return [
        ScoreRecord(item, rater, subject, criterion, score)
        for (item, rater, criterion), score in grid.items()
    ]


def two_item_fixture() -> list[ScoreRecord]:
    # 2 items x 1 rater x 2 criteria; a scores (2,1), b scores (1,1) per item.
    grid_a = {("i1", "r1", "c1"): 2, ("i1", "r1", "c2"): 1,
              ("i2", "r1", "c1"): 2, ("i2", "r1", "c2"): 1}
    grid_b = {("i1", "r1", "c1"): 1, ("i1", "r1", "c2"): 1,
              ("i2", "r1", "c1"): 1, ("i2", "r1", "c2"): 1}
    return records_for("a", grid_a) + records_for("b", grid_b)


class TestRounding:
    @pytest.mark.parametrize(
        "n,d,expected",
        [
            (119, 300, 39.67),   # 39.666... rounds up
            (104, 300, 34.67),
            (77, 300, 25.67),
            (1, 3, 33.33),
            (2, 3, 66.67),
            (1, 800, 0.13),      # exactly .125 -> half-up
            (0, 5, 0.0),
            (5, 5, 100.0),
        ],
    )
    def test_as_percent_half_up(self, n, d, expected):
        assert as_percent(n, d) == expected

    def test_round2_half_up(self):
        assert round2(1, 8) == 0.13  # 0.125
        assert round2(588, 300) == 1.96
        assert round2(3, 3) == 1.0


class TestPairwiseHandEnumerated:
    def test_per_criterion_50_50_0(self):
        # by hand: 4 units; c1 won twice (2>1), c2 tied twice (1=1)
        rates = pairwise_rates(two_item_fixture(), "a", "b", Granularity.PER_CRITERION)
        assert (rates.win, rates.tie, rates.loss) == (50.0, 50.0, 0.0)
        assert (rates.win_units, rates.tie_units, rates.loss_units) == (2, 2, 0)

    def test_per_rater_total_100_0_0(self):
        # by hand: totals per item are a=3 vs b=2; both units are wins
        rates = pairwise_rates(two_item_fixture(), "a", "b", Granularity.PER_RATER_TOTAL)
        assert (rates.win, rates.tie, rates.loss) == (100.0, 0.0, 0.0)
        assert rates.total_units == 2

    def test_self_comparison_is_all_ties(self):
        rates = pairwise_rates(two_item_fixture(), "a", "a")
        assert (rates.win, rates.tie, rates.loss) == (0.0, 100.0, 0.0)

    def test_unknown_subject_rejected(self):
        with pytest.raises(InvalidRequestError, match="unknown subject"):
            pairwise_rates(two_item_fixture(), "a", "zz")

    def test_disjoint_units_rejected(self):
        records = records_for("a", {("i1", "r1", "c1"): 2}) + records_for(
            "b", {("i9", "r9", "c1"): 1}
        )
        with pytest.raises(InvalidRequestError, match="no shared comparison units"):
            pairwise_rates(records, "a", "b")

    def test_known_rate_reconstruction_from_unit_counts(self):
        # 300 per-rater-total units split 119/104/77 between win/tie/loss:
        # 119/300 = 39.666..% -> 39.67, 104/300 -> 34.67, 77/300 -> 25.67
        records = []
        unit = 0
        for wins in range(119):
            records.append(ScoreRecord(f"i{unit}", "r", "a", "c", 2))
            records.append(ScoreRecord(f"i{unit}", "r", "b", "c", 1))
            unit += 1
        for ties in range(104):
            records.append(ScoreRecord(f"i{unit}", "r", "a", "c", 1))
            records.append(ScoreRecord(f"i{unit}", "r", "b", "c", 1))
            unit += 1
        for losses in range(77):
            records.append(ScoreRecord(f"i{unit}", "r", "a", "c", 0))
            records.append(ScoreRecord(f"i{unit}", "r", "b", "c", 2))
            unit += 1
        rates = pairwise_rates(records, "a", "b", Granularity.PER_RATER_TOTAL)
        assert (rates.win, rates.tie, rates.loss) == (39.67, 34.67, 25.67)
        assert rates.total_units == 300


def random_pair_records(rng) -> list[ScoreRecord]:
    items = [f"i{n}" for n in range(rng.randint(1, 6))]
    raters = [f"r{n}" for n in range(rng.randint(1, 4))]
    criteria = [f"c{n}" for n in range(rng.randint(1, 5))]
    records = []
    for subject in ("a", "b"):
        for item in items:
            for rater in raters:
                for criterion in criteria:
                    records.append(
                        ScoreRecord(item, rater, subject, criterion, rng.randint(0, 2))
                    )
    return records


def brute_force_counts(records, subject_a, subject_b, granularity):
    """Independent enumeration: explicit loops over the unit grid."""
    items = sorted({r.item_id for r in records})
    raters = sorted({r.rater_id for r in records})
    criteria = sorted({r.criterion for r in records})
    score = {(r.subject_id, r.item_id, r.rater_id, r.criterion): r.score for r in records}
    win = tie = loss = 0
    if granularity is Granularity.PER_CRITERION:
        for item in items:
            for rater in raters:
                for criterion in criteria:
                    a = score.get((subject_a, item, rater, criterion))
                    b = score.get((subject_b, item, rater, criterion))
                    if a is None or b is None:
                        continue
                    win += a > b
                    tie += a == b
                    loss += a < b
    else:
        for item in items:
            for rater in raters:
                a_scores = [
                    score[(subject_a, item, rater, c)]
                    for c in criteria
                    if (subject_a, item, rater, c) in score
                ]
                b_scores = [
                    score[(subject_b, item, rater, c)]
                    for c in criteria
                    if (subject_b, item, rater, c) in score
                ]
                if not a_scores or not b_scores:
                    continue
                a, b = sum(a_scores), sum(b_scores)
                win += a > b
                tie += a == b
                loss += a < b
    return win, tie, loss


class TestPairwiseAlgebra:
    @given(seed=st.integers(0, 10_000), per_criterion=st.booleans())
    @settings(max_examples=150, deadline=None)
    def test_matches_brute_force_and_identities(self, seed, per_criterion):
        import random

        rng = random.Random(seed)
        records = random_pair_records(rng)
        granularity = (
            Granularity.PER_CRITERION if per_criterion else Granularity.PER_RATER_TOTAL
        )
        forward = pairwise_rates(records, "a", "b", granularity)
        backward = pairwise_rates(records, "b", "a", granularity)
        expected = brute_force_counts(records, "a", "b", granularity)
        assert (forward.win_units, forward.tie_units, forward.loss_units) == expected
        assert forward.win_units == backward.loss_units
        assert forward.tie_units == backward.tie_units
        assert forward.loss_units == backward.win_units
        assert forward.total_units == sum(expected)

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=50, deadline=None)
    def test_relabeling_item_and_rater_ids_preserves_rates(self, seed):
        import random

        rng = random.Random(seed)
        records = random_pair_records(rng)
        item_map = {}
        rater_map = {}
        relabeled = [
            ScoreRecord(
                item_map.setdefault(r.item_id, f"x{len(item_map)}"),
                rater_map.setdefault(r.rater_id, f"y{len(rater_map)}"),
                r.subject_id,
                r.criterion,
                r.score,
            )
            for r in records
        ]
        before = pairwise_rates(records, "a", "b")
        after = pairwise_rates(relabeled, "a", "b")
        assert (before.win, before.tie, before.loss) == (after.win, after.tie, after.loss)


class TestCriterionMeans:
    def test_all_twos_mean_two(self):
        grid = {(f"i{n}", "r1", c): 2 for n in range(4) for c in ("c1", "c2")}
        means = criterion_means(records_for("a", grid), "a")
        assert means == {"c1": 2.0, "c2": 2.0}

    def test_zero_one_two_means_one(self):
        records = [
            ScoreRecord("i1", "r1", "a", "c1", 0),
            ScoreRecord("i2", "r1", "a", "c1", 1),
            ScoreRecord("i3", "r1", "a", "c1", 2),
        ]
        assert criterion_means(records, "a") == {"c1": 1.0}

    def test_known_mean_reconstruction_from_counts(self):
        # 300 scores summing to 588 (288 twos + 12 ones): 588/300 = 1.96
        records = []
        combos = [(f"i{n}", f"r{m}") for n in range(50) for m in range(6)]
        for index, (item, rater) in enumerate(combos):
            records.append(ScoreRecord(item, rater, "m", "Grammar", 1 if index < 12 else 2))
        assert criterion_means(records, "m") == {"Grammar": 1.96}

    def test_unknown_subject_rejected(self):
        with pytest.raises(InvalidRequestError, match="unknown subject"):
            criterion_means([], "a")

    @given(
        scores=st.lists(st.integers(0, 2), min_size=1, max_size=40),
        bump_index=st.integers(0, 39),
    )
    @settings(max_examples=100, deadline=None)
    def test_mean_bounds_and_monotonicity(self, scores, bump_index):
        records = [
            ScoreRecord(f"i{n}", "r1", "a", "c1", score) for n, score in enumerate(scores)
        ]
        mean = criterion_means(records, "a")["c1"]
        assert 0.0 <= mean <= 2.0
        index = bump_index % len(scores)
        if scores[index] < 2:
            bumped = list(scores)
            bumped[index] += 1
            records2 = [
                ScoreRecord(f"i{n}", "r1", "a", "c1", s) for n, s in enumerate(bumped)
            ]
            assert criterion_means(records2, "a")["c1"] >= mean


def moderation(records_spec) -> list[ModerationRecord]:
    return [
        ModerationRecord(f"s{n}", source, true, predicted)
        for n, (source, true, predicted) in enumerate(records_spec)
    ]


class TestFalsePositiveRate:
    def test_half_missed_is_50(self):
        # by hand: 4 truly inappropriate, 2 predicted appropriate -> 2/4 = 50.00
        records = moderation(
            [
                ("gutenberg", "inappropriate", "appropriate"),
                ("gutenberg", "inappropriate", "appropriate"),
                ("gutenberg", "inappropriate", "inappropriate"),
                ("gutenberg", "inappropriate", "inappropriate"),
                ("gutenberg", "appropriate", "appropriate"),
            ]
        )
        assert false_positive_rate(records) == 50.0

    def test_all_correct_is_zero(self):
        records = moderation(
            [
                ("gutenberg", "inappropriate", "inappropriate"),
                ("gutenberg", "appropriate", "appropriate"),
            ]
        )
        assert false_positive_rate(records) == 0.0

    def test_known_fpr_reconstruction_from_counts(self):
        # 100 truly inappropriate with 9 let through -> 9.00;
        # a synthetic set with none let through -> 0.00
        rows = [("gutenberg", "inappropriate", "appropriate")] * 9
        rows += [("gutenberg", "inappropriate", "inappropriate")] * 91
        rows += [("synthetic", "inappropriate", "inappropriate")] * 8
        rows += [("synthetic", "appropriate", "appropriate")] * 42
        records = moderation(rows)
        assert false_positive_rate(records, "gutenberg") == 9.0
        assert false_positive_rate(records, "synthetic") == 0.0

    def test_source_filter_separates_populations(self):
        records = moderation(
            [
                ("gutenberg", "inappropriate", "appropriate"),
                ("synthetic", "inappropriate", "inappropriate"),
            ]
        )
        assert false_positive_rate(records, "gutenberg") == 100.0
        assert false_positive_rate(records, "synthetic") == 0.0

    def test_empty_denominator_rejected(self):
        records = moderation([("gutenberg", "appropriate", "appropriate")])
        with pytest.raises(InvalidRequestError, match="inappropriate"):
            false_positive_rate(records)

    def test_bad_label_rejected(self):
        with pytest.raises(InvalidRequestError):
            ModerationRecord("s1", "gutenberg", "unsafe", "appropriate")

    @given(
        outcomes=st.lists(
            st.tuples(st.booleans(), st.booleans()), min_size=1, max_size=50
        ).filter(lambda rows: any(not truly_ok for truly_ok, _ in rows))
    )
    @settings(max_examples=100, deadline=None)
    def test_fpr_bounds_and_zero_iff_no_miss(self, outcomes):
        rows = [
            (
                "gutenberg",
                "appropriate" if truly_ok else "inappropriate",
                "appropriate" if predicted_ok else "inappropriate",
            )
            for truly_ok, predicted_ok in outcomes
        ]
        fpr = false_positive_rate(moderation(rows))
        assert 0.0 <= fpr <= 100.0
        missed = sum(
            1 for truly_ok, predicted_ok in outcomes if not truly_ok and predicted_ok
        )
        assert (fpr == 0.0) == (missed == 0)
