"""Erasure games, reachable-state sets, and branching-indifference checks.

Models the two payoff games on a branching measurement (reward on one
result versus reward on the other), the erasure step that destroys the
result record while keeping the reward, and the sets of global states
reachable by erasure.  The reachable sets of the two games coincide
exactly when the reward branches carry equal weight, which is the
executable core of the equal-weight indifference argument.  Refinement
splits one outcome into equally weighted suboutcomes and the derived
probability of every coarse event must not move.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .ordering import (
    EventRef,
    MeasurementFamily,
    WeightedMeasurement,
    induced_ordering,
)
from .quantum import WeightsDontSumToOne
from .representation import (
    derive_representation,
    uniform_measurement,
    _find_uniform,
)


class IndexOutOfRange(ValueError):
    """Erasure microstate index falls outside the configured range."""


class BranchCollision(ValueError):
    """A microstate choice would merge two distinct branches."""


class WeightOutOfRange(ValueError):
    """Three-outcome construction needs 0 < w <= 1/2."""


class UnknownOutcome(ValueError):
    """Refinement target is not an outcome of the measurement."""


class ZeroWeightRefinement(ValueError):
    """Refinement target has zero weight."""


DEFAULT_INDEX_RANGE = 4

# Amplitude-squared bookkeeping is floating point; canonical comparison
# quantizes to this many decimals, far below any weight gap on the
# rational grids in play.
_CANONICAL_DECIMALS = 12


@dataclass(frozen=True)
class BranchLabel:
    """Result record of one branch: result id, reward flag, microstate.

    Erased branches carry a microstate index in ``detail``; live results
    carry none.
    """

    result: str
    reward: bool
    detail: int | None = None

    def __post_init__(self) -> None:
        if self.result == "erased" and self.detail is None:
            raise ValueError("erased labels need a microstate index")
        if self.result != "erased" and self.detail is not None:
            raise ValueError("only erased labels carry a microstate index")

    def label(self) -> str:
        core = f"erased({self.detail})" if self.result == "erased" else self.result
        return f"{core};{'reward' if self.reward else 'no reward'}"


@dataclass(frozen=True)
class BranchState:
    """Superposition over distinct branch labels."""

    branches: tuple[tuple[BranchLabel, complex], ...]

    def __post_init__(self) -> None:
        labels = [label for label, _ in self.branches]
        if len(set(labels)) != len(labels):
            raise BranchCollision("branch labels must be pairwise distinct")
        total = sum(abs(a) ** 2 for _, a in self.branches)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"squared amplitudes sum to {total!r}, not 1")

    def canonical_key(self) -> tuple:
        """Phase-free fingerprint: sorted (label, squared amplitude) pairs.

        Zero-amplitude branches are dropped and per-branch phase is
        discarded, so physically indistinguishable states compare equal.
        """
        items = []
        for label, amp in self.branches:
            w = round(abs(amp) ** 2, _CANONICAL_DECIMALS)
            if w == 0.0:
                continue
            items.append((label.result, label.detail is None, label.detail or 0,
                          label.reward, w))
        return tuple(sorted(items))


@dataclass(frozen=True)
class GameSpec:
    """Which measurement results pay the reward."""

    reward_results: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "reward_results", frozenset(self.reward_results))


@dataclass(frozen=True)
class ReachableSet:
    """Canonicalized set of branch states reachable by erasure."""

    states: frozenset[tuple]

    @classmethod
    def from_states(cls, states: Iterable[BranchState]) -> "ReachableSet":
        return cls(frozenset(s.canonical_key() for s in states))

    def __len__(self) -> int:
        return len(self.states)


def play_game(
    prep_weights: Sequence[tuple[str, Fraction]], game: GameSpec
) -> BranchState:
    """Run one game: one branch per result, amplitude sqrt(weight).

    Weights must be strictly positive and sum exactly to 1; the reward
    flag on each branch comes from the game's payoff rule.
    """
    if not prep_weights:
        raise ValueError("preparation needs at least one result")
    results = [r for r, _ in prep_weights]
    if len(set(results)) != len(results):
        raise ValueError("result ids must be unique")
    weights = [Fraction(w) for _, w in prep_weights]
    if any(w <= 0 for w in weights):
        raise ValueError("preparation weights must be strictly positive")
    if sum(weights, Fraction(0)) != 1:
        raise WeightsDontSumToOne(
            f"preparation weights sum to {sum(weights, Fraction(0))}, not 1"
        )
    unknown = game.reward_results - set(results)
    if unknown:
        raise ValueError(f"game rewards unknown results {sorted(unknown)}")
    branches = tuple(
        (BranchLabel(r, reward=r in game.reward_results), complex(math.sqrt(w)))
        for r, w in zip(results, weights)
    )
    return BranchState(branches)


def erase(
    state: BranchState,
    microstate_choice: Mapping[BranchLabel, int],
    index_range: int = DEFAULT_INDEX_RANGE,
) -> BranchState:
    """Destroy result records: every branch becomes erased(i).

    The choice assigns one microstate index (1..index_range) to every
    branch; reward flags and amplitudes are untouched.  A choice that
    would merge two branches into one label is rejected, since the
    erasure step is a unitary process and cannot fuse branches.
    """
    new_branches = []
    for label, amp in state.branches:
        if label not in microstate_choice:
            raise ValueError(f"microstate choice misses branch {label.label()}")
        i = microstate_choice[label]
        if not (1 <= i <= index_range):
            raise IndexOutOfRange(
                f"microstate index {i} outside 1..{index_range}"
            )
        new_branches.append((BranchLabel("erased", label.reward, i), amp))
    return BranchState(tuple(new_branches))


def reachable_set(
    prep_weights: Sequence[tuple[str, Fraction]],
    game: GameSpec,
    index_range: int = DEFAULT_INDEX_RANGE,
) -> ReachableSet:
    """All erased states over every admissible microstate choice."""
    if index_range < 1:
        raise ValueError("index_range must be at least 1")
    state = play_game(prep_weights, game)
    labels = [label for label, _ in state.branches]
    states = []
    for assignment in itertools.product(range(1, index_range + 1), repeat=len(labels)):
        choice = dict(zip(labels, assignment))
        try:
            states.append(erase(state, choice, index_range))
        except BranchCollision:
            continue
    return ReachableSet.from_states(states)


def sets_equal(a: ReachableSet, b: ReachableSet) -> bool:
    """Set equality under canonical (phase-free, zero-pruned) state equality."""
    return a.states == b.states


# Result ids of the symmetric three-branch construction.
THREE_OUTCOME_RESULTS = ("plus_z", "minus_z", "zero_z")


def three_outcome_game(
    w: Fraction,
    game: GameSpec,
    index_range: int = DEFAULT_INDEX_RANGE,
) -> ReachableSet:
    """Reachable set for the symmetric three-branch construction.

    Preparation weights (w, w, 1-2w) on results plus_z/minus_z/zero_z,
    reward on plus_z or minus_z depending on the game.  The zero_z
    branch is dropped when 1-2w vanishes, so w = 1/2 degenerates to the
    two-branch game.  Both games reach the same set for every
    admissible w: one reward branch of weight w, no-reward branches of
    weights w and 1-2w.
    """
    w = Fraction(w)
    if not (0 < w <= Fraction(1, 2)):
        raise WeightOutOfRange(f"need 0 < w <= 1/2, got {w}")
    plus, minus, zero = THREE_OUTCOME_RESULTS
    prep = [(plus, w), (minus, w)]
    rest = 1 - 2 * w
    if rest > 0:
        prep.append((zero, rest))
    return reachable_set(prep, game, index_range)


def apply_branch_phase(
    state: BranchState, phases: Mapping[BranchLabel, float]
) -> BranchState:
    """Multiply each branch amplitude by exp(i * theta).

    Canonical comparison treats per-branch phase as identity, so this
    never changes a reachable-set verdict.
    """
    new_branches = tuple(
        (label, amp * cmath.exp(1j * phases.get(label, 0.0)))
        for label, amp in state.branches
    )
    return BranchState(new_branches)


def refine(
    measurement: WeightedMeasurement, outcome: str, parts: int
) -> WeightedMeasurement:
    """Split one outcome into equally weighted suboutcomes.

    The target outcome of weight w is replaced by `parts` suboutcomes of
    exact weight w/parts each; everything else is untouched.  parts = 1
    is the admissible no-op split (single suboutcome, full weight).
    """
    if parts < 1:
        raise ValueError("parts must be at least 1")
    if outcome not in measurement.outcomes:
        raise UnknownOutcome(
            f"{outcome!r} is not an outcome of measurement {measurement.id!r}"
        )
    w = measurement.event_weight([outcome])
    if w == 0:
        raise ZeroWeightRefinement(f"outcome {outcome!r} has zero weight")
    sub_weight = w / parts
    existing = set(measurement.outcomes)
    new_outcomes: list[str] = []
    new_weights: list[Fraction] = []
    for o, wt in zip(measurement.outcomes, measurement.weights):
        if o != outcome:
            new_outcomes.append(o)
            new_weights.append(wt)
            continue
        for i in range(1, parts + 1):
            sub = f"{o}_{i}"
            if sub in existing:
                raise ValueError(f"suboutcome name {sub!r} collides")
            new_outcomes.append(sub)
            new_weights.append(sub_weight)
    return WeightedMeasurement(measurement.id, tuple(new_outcomes), tuple(new_weights))


@dataclass(frozen=True)
class RefinementSpec:
    """Which outcome of which measurement splits into how many parts."""

    measurement_id: str
    outcome: str
    parts: int


def refine_family(
    family: MeasurementFamily, spec: RefinementSpec
) -> MeasurementFamily:
    """Apply a refinement to the named measurement inside a family."""
    if spec.measurement_id not in family.by_id:
        raise UnknownOutcome(f"no measurement {spec.measurement_id!r} in family")
    new_measurements = tuple(
        refine(m, spec.outcome, spec.parts) if m.id == spec.measurement_id else m
        for m in family.measurements
    )
    return MeasurementFamily(new_measurements)


def suboutcome_image(
    family: MeasurementFamily, spec: RefinementSpec, ref: EventRef
) -> EventRef:
    """Map a pre-refinement event to its union-of-suboutcomes image."""
    if ref.measurement_id != spec.measurement_id or spec.outcome not in ref.event:
        return ref
    expanded = set(ref.event) - {spec.outcome}
    expanded.update(f"{spec.outcome}_{i}" for i in range(1, spec.parts + 1))
    return EventRef(ref.measurement_id, frozenset(expanded))


def _with_uniform(family: MeasurementFamily, K: int) -> MeasurementFamily:
    if _find_uniform(family, K) is not None:
        return family
    gadget = uniform_measurement(K)
    if gadget.id in family.by_id:
        gadget = uniform_measurement(K, id_prefix="uniform-extra")
    return MeasurementFamily(family.measurements + (gadget,))


def coarse_event_probability_invariance(
    family: MeasurementFamily, spec: RefinementSpec, K: int
) -> bool:
    """Whether refinement leaves every coarse event's probability fixed.

    Derives the representing measure before and after the split (grid
    constant scaled from K to K * parts) and compares, exactly, the
    value of every pre-refinement event against the value of its
    suboutcome image.  Families are padded with the uniform grid
    measurement the derivation requires, if absent.
    """
    base = _with_uniform(family, K)
    pr_before = derive_representation(induced_ordering(base), K)

    refined = refine_family(family, spec)
    k_after = K * spec.parts
    after = _with_uniform(refined, k_after)
    pr_after = derive_representation(induced_ordering(after), k_after)

    for mid in family.sorted_ids:
        m = family.by_id[mid]
        for mask in range(2 ** len(m.outcomes)):
            ref = EventRef(mid, m.mask_event(mask))
            image = suboutcome_image(family, spec, ref)
            if pr_before.value(ref) != pr_after.value(image):
                return False
    return True
