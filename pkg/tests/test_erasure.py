"""Erasure games, reachable sets, refinement, and coarse invariance."""
import math
from fractions import Fraction

import numpy as np
import pytest

from born_kernel import (
    BranchLabel,
    BranchState,
    GameSpec,
    IndexOutOfRange,
    MeasurementFamily,
    ReachableSet,
    RefinementSpec,
    UnknownOutcome,
    WeightOutOfRange,
    WeightedMeasurement,
    WeightsDontSumToOne,
    ZeroWeightRefinement,
    apply_branch_phase,
    coarse_event_probability_invariance,
    derive_representation,
    erase,
    induced_ordering,
    play_game,
    reachable_set,
    refine,
    refine_family,
    sets_equal,
    suboutcome_image,
    three_outcome_game,
    uniform_measurement,
)
from born_kernel.erasure import THREE_OUTCOME_RESULTS
from born_kernel.ordering import EventRef

GAME1 = GameSpec(frozenset({"up"}))
GAME2 = GameSpec(frozenset({"down"}))
HALF = [("up", Fraction(1, 2)), ("down", Fraction(1, 2))]


class TestPlayGame:
    def test_game1_state(self):
        state = play_game(HALF, GAME1)
        assert state.branches == (
            (BranchLabel("up", True), complex(math.sqrt(0.5))),
            (BranchLabel("down", False), complex(math.sqrt(0.5))),
        )

    def test_game2_swaps_rewards(self):
        state = play_game(HALF, GAME2)
        flags = {label.result: label.reward for label, _ in state.branches}
        assert flags == {"up": False, "down": True}

    def test_certain_single_branch(self):
        state = play_game([("up", Fraction(1))], GAME1)
        assert len(state.branches) == 1
        label, amp = state.branches[0]
        assert label.reward and amp == complex(1.0)

    def test_weights_must_sum_to_one(self):
        with pytest.raises(WeightsDontSumToOne):
            play_game([("up", Fraction(1, 2)), ("down", Fraction(1, 4))], GAME1)

    def test_weights_must_be_positive(self):
        with pytest.raises(ValueError):
            play_game([("up", Fraction(0)), ("down", Fraction(1))], GAME1)


class TestErase:
    def test_relabels_results(self):
        state = play_game(HALF, GAME1)
        up, down = (label for label, _ in state.branches)
        erased = erase(state, {up: 1, down: 2}, index_range=2)
        labels = {label for label, _ in erased.branches}
        assert labels == {
            BranchLabel("erased", True, 1),
            BranchLabel("erased", False, 2),
        }

    def test_single_branch(self):
        state = play_game([("up", Fraction(1))], GAME1)
        (label, _), = state.branches
        erased = erase(state, {label: 1}, index_range=1)
        assert erased.branches[0][0] == BranchLabel("erased", True, 1)
        assert erased.branches[0][1] == complex(1.0)

    def test_game2_reaches_the_same_state_as_game1(self):
        """Canonical-equality oracle: the two games meet after erasure."""
        s1 = play_game(HALF, GAME1)
        s2 = play_game(HALF, GAME2)
        up1, down1 = (label for label, _ in s1.branches)
        down2 = next(l for l, _ in s2.branches if l.result == "down")
        up2 = next(l for l, _ in s2.branches if l.result == "up")
        i, j = 1, 2
        e1 = erase(s1, {up1: i, down1: j}, index_range=2)
        e2 = erase(s2, {down2: i, up2: j}, index_range=2)
        assert e1.canonical_key() == e2.canonical_key()

    def test_index_out_of_range(self):
        state = play_game(HALF, GAME1)
        up, down = (label for label, _ in state.branches)
        with pytest.raises(IndexOutOfRange):
            erase(state, {up: 3, down: 1}, index_range=2)


class TestReachableSets:
    def test_half_gives_four_states_each_and_equal(self):
        s1 = reachable_set(HALF, GAME1, index_range=2)
        s2 = reachable_set(HALF, GAME2, index_range=2)
        assert len(s1) == len(s2) == 4
        assert sets_equal(s1, s2)

    def test_quarter_sets_disjoint(self):
        prep = [("up", Fraction(1, 4)), ("down", Fraction(3, 4))]
        s1 = reachable_set(prep, GAME1, index_range=2)
        s2 = reachable_set(prep, GAME2, index_range=2)
        assert not sets_equal(s1, s2)
        assert not (s1.states & s2.states)

    def test_equal_iff_half_across_denominator_32(self):
        values = sorted(
            {Fraction(n, d) for d in range(2, 33) for n in range(1, d)}
        )
        for p in values:
            prep = [("up", p), ("down", 1 - p)]
            for index_range in range(1, 5):
                s1 = reachable_set(prep, GAME1, index_range)
                s2 = reachable_set(prep, GAME2, index_range)
                assert sets_equal(s1, s2) == (p == Fraction(1, 2))

    def test_empty_sets_equal(self):
        assert sets_equal(
            ReachableSet(frozenset()), ReachableSet(frozenset())
        )


class TestThreeOutcomeGame:
    g1 = GameSpec(frozenset({THREE_OUTCOME_RESULTS[0]}))
    g2 = GameSpec(frozenset({THREE_OUTCOME_RESULTS[1]}))

    def test_half_degenerates_to_two_branches(self):
        prep_equiv = [
            (THREE_OUTCOME_RESULTS[0], Fraction(1, 2)),
            (THREE_OUTCOME_RESULTS[1], Fraction(1, 2)),
        ]
        assert sets_equal(
            three_outcome_game(Fraction(1, 2), self.g1, 2),
            reachable_set(prep_equiv, self.g1, 2),
        )

    def test_quarter_equal_sets(self):
        a = three_outcome_game(Fraction(1, 4), self.g1, 2)
        b = three_outcome_game(Fraction(1, 4), self.g2, 2)
        assert sets_equal(a, b)

    def test_third_equal_sets_enumeration_oracle(self):
        a = three_outcome_game(Fraction(1, 3), self.g1, 2)
        b = three_outcome_game(Fraction(1, 3), self.g2, 2)
        assert sets_equal(a, b)
        # Oracle: expected canonical keys built by hand.  Branch weights
        # all 1/3; the two no-reward indices must differ; reward index is
        # free.  Canonical keys sort their items.
        w = round(1 / 3, 12)
        expected = set()
        for i in (1, 2):
            for j, k in [(1, 2), (2, 1)]:
                items = [
                    ("erased", False, i, True, w),
                    ("erased", False, j, False, w),
                    ("erased", False, k, False, w),
                ]
                expected.add(tuple(sorted(items)))
        assert a.states == expected

    def test_weight_bounds(self):
        with pytest.raises(WeightOutOfRange):
            three_outcome_game(Fraction(0), self.g1, 2)
        with pytest.raises(WeightOutOfRange):
            three_outcome_game(Fraction(2, 3), self.g1, 2)


class TestBranchPhase:
    def test_zero_phase_identity(self):
        state = play_game(HALF, GAME1)
        same = apply_branch_phase(state, {})
        assert same.canonical_key() == state.canonical_key()

    def test_pi_phase_canonically_equal(self):
        state = play_game(HALF, GAME1)
        label = state.branches[0][0]
        flipped = apply_branch_phase(state, {label: math.pi})
        assert flipped.branches[0][1] == pytest.approx(
            -state.branches[0][1], abs=1e-12
        )
        assert flipped.canonical_key() == state.canonical_key()

    def test_random_phases_keep_sets_equal(self):
        rng = np.random.default_rng(23)
        s1 = play_game(HALF, GAME1)
        s2 = play_game(HALF, GAME2)
        keys = set()
        for state in (s1, s2):
            labels = [label for label, _ in state.branches]
            phased = apply_branch_phase(
                state, {l: float(rng.uniform(0, 2 * np.pi)) for l in labels}
            )
            erased = erase(phased, {l: 1 for l in labels}, index_range=1)
            keys.add(erased.canonical_key())
        assert len(keys) == 1


class TestRefine:
    def test_coin_heads_into_four(self):
        coin = WeightedMeasurement(
            "coin", ("heads", "tails"), (Fraction(1, 2), Fraction(1, 2))
        )
        refined = refine(coin, "heads", 4)
        assert refined.outcomes == (
            "heads_1", "heads_2", "heads_3", "heads_4", "tails"
        )
        # Exact rational division oracle.
        assert Fraction(1, 2) / 4 == Fraction(1, 8)
        assert refined.weights == (Fraction(1, 8),) * 4 + (Fraction(1, 2),)

    def test_merge_event_recovers_coarse_weight(self):
        coin = WeightedMeasurement(
            "coin", ("heads", "tails"), (Fraction(1, 2), Fraction(1, 2))
        )
        refined = refine(coin, "heads", 2)
        assert refined.event_weight({"heads_1", "heads_2"}) == Fraction(1, 2)

    def test_million_fold_exact(self):
        coin = WeightedMeasurement(
            "coin", ("heads", "tails"), (Fraction(1, 2), Fraction(1, 2))
        )
        big = refine(coin, "heads", 10**6)
        assert len(big.outcomes) == 10**6 + 1
        assert big.weights[0] == Fraction(1, 2 * 10**6)
        coarse = big.event_weight(o for o in big.outcomes if o != "tails")
        assert coarse == Fraction(1, 2)

    def test_every_preexisting_event_weight_preserved(self):
        m = WeightedMeasurement(
            "m",
            ("a", "b", "c"),
            (Fraction(1, 6), Fraction(1, 3), Fraction(1, 2)),
        )
        refined = refine(m, "b", 3)
        assert refined.event_weight({"a"}) == Fraction(1, 6)
        assert refined.event_weight({"c"}) == Fraction(1, 2)
        assert refined.event_weight({"b_1", "b_2", "b_3"}) == Fraction(1, 3)
        assert refined.event_weight(
            {"a", "b_1", "b_2", "b_3"}
        ) == m.event_weight({"a", "b"})

    def test_errors(self):
        m = WeightedMeasurement(
            "m", ("a", "b", "z"), (Fraction(1, 2), Fraction(1, 2), Fraction(0))
        )
        with pytest.raises(UnknownOutcome):
            refine(m, "nope", 2)
        with pytest.raises(ZeroWeightRefinement):
            refine(m, "z", 2)
        with pytest.raises(ValueError):
            refine(m, "a", 0)


class TestCoarseInvariance:
    def test_coin_refined_three_ways(self):
        coin = WeightedMeasurement(
            "coin", ("heads", "tails"), (Fraction(1, 2), Fraction(1, 2))
        )
        family = MeasurementFamily((coin,))
        spec = RefinementSpec("coin", "heads", 3)
        assert coarse_event_probability_invariance(family, spec, 2)
        # And the refined image really carries probability 1/2.
        refined = refine_family(family, spec)
        padded = MeasurementFamily(
            refined.measurements + (uniform_measurement(6),)
        )
        pr = derive_representation(induced_ordering(padded), 6)
        image = suboutcome_image(
            family, spec, EventRef("coin", frozenset({"heads"}))
        )
        assert pr.value(image) == Fraction(1, 2)

    def test_parts_one_noop(self):
        family = MeasurementFamily(
            (
                WeightedMeasurement(
                    "m", ("a", "b"), (Fraction(1, 4), Fraction(3, 4))
                ),
            )
        )
        assert coarse_event_probability_invariance(
            family, RefinementSpec("m", "a", 1), 4
        )

    def test_quarter_outcome_split_in_two(self):
        family = MeasurementFamily(
            (
                WeightedMeasurement(
                    "m", ("a", "b"), (Fraction(1, 4), Fraction(3, 4))
                ),
            )
        )
        spec = RefinementSpec("m", "a", 2)
        assert coarse_event_probability_invariance(family, spec, 4)
        refined = refine_family(family, spec)
        padded = MeasurementFamily(
            refined.measurements + (uniform_measurement(8),)
        )
        pr = derive_representation(induced_ordering(padded), 8)
        image = suboutcome_image(family, spec, EventRef("m", frozenset({"a"})))
        assert pr.value(image) == Fraction(1, 4)


class TestCanonicalEquality:
    def test_invariant_under_branch_reordering(self):
        state = play_game(HALF, GAME1)
        reordered = BranchState(tuple(reversed(state.branches)))
        assert reordered.canonical_key() == state.canonical_key()

    def test_zero_amplitude_branches_dropped(self):
        a = BranchState(
            (
                (BranchLabel("up", True), complex(1.0)),
                (BranchLabel("down", False), complex(0.0)),
            )
        )
        b = BranchState(((BranchLabel("up", True), complex(1.0)),))
        assert a.canonical_key() == b.canonical_key()


class TestBranchStateValidation:
    def test_duplicate_labels_rejected(self):
        label = BranchLabel("up", True)
        with pytest.raises(ValueError):
            BranchState(((label, complex(0.8)), (label, complex(0.6))))

    def test_norm_enforced(self):
        with pytest.raises(ValueError):
            BranchState(((BranchLabel("up", True), complex(0.5)),))

    def test_erased_label_needs_detail(self):
        with pytest.raises(ValueError):
            BranchLabel("erased", True)
        with pytest.raises(ValueError):
            BranchLabel("up", True, detail=2)

    def test_total_weight_preserved_through_pipeline(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            n = int(rng.integers(1, 5))
            parts = rng.multinomial(16, [1.0 / n] * n)
            while any(p == 0 for p in parts):
                parts = rng.multinomial(16, [1.0 / n] * n)
            prep = [(f"r{i}", Fraction(int(p), 16)) for i, p in enumerate(parts)]
            game = GameSpec(frozenset({"r0"}))
            state = play_game(prep, game)
            labels = [label for label, _ in state.branches]
            phased = apply_branch_phase(
                state, {l: float(rng.uniform(0, 2 * np.pi)) for l in labels}
            )
            erased = erase(
                phased,
                {l: i + 1 for i, l in enumerate(labels)},
                index_range=4,
            )
            total = sum(abs(a) ** 2 for _, a in erased.branches)
            assert total == pytest.approx(1.0, abs=1e-12)
