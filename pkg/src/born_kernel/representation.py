"""Representing probability measures for likelihood orderings.

A probability assignment represents an ordering when it has the standard
boundary values, is finitely additive on disjoint events, and agrees
with the ordering on every pair of events.  The constructive derivation
reproduces the uniqueness argument: the uniform K-outcome measurement
pins 1/K on each of its outcomes, blocks of uniform outcomes pin k/K,
and equal-likelihood judgments transfer those values to every event of
matching weight.  The exhaustive search then confirms on small instances
that no other additive assignment on the 1/K grid represents the
ordering.

Everything in this module is exact rational arithmetic.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .ordering import (
    ALL_CHECKS,
    EventRef,
    LikelihoodOrdering,
    MeasurementFamily,
    WeightedMeasurement,
    ref_sort_key,
)


class SizeLimitExceeded(ValueError):
    """Requested family would exceed the configured size cap."""


class PreconditionViolated(ValueError):
    """A named axiom check failed before the derivation could start."""

    def __init__(self, axiom: str, message: str | None = None):
        self.axiom = axiom
        super().__init__(message or f"ordering violates {axiom}")


class MissingUniformMeasurement(ValueError):
    """No uniform K-outcome measurement is present in the family."""


class NonconformingDenominator(ValueError):
    """Some weight's denominator does not divide the grid constant K."""


class FamilyMismatch(ValueError):
    """Assignment and ordering refer to different families."""


class SearchSpaceTooLarge(ValueError):
    """Instance exceeds the brute-force caps."""


DEFAULT_FAMILY_CAP = 10**6
FAMILY_CAP_ENV = "BORN_KERNEL_CAP"

# Brute-force caps for the exhaustive search.
MAX_SEARCH_OUTCOMES = 12
MAX_SEARCH_MEASUREMENTS = 6
MAX_SEARCH_PARTIALS = 200_000


def family_size_cap() -> int:
    raw = os.environ.get(FAMILY_CAP_ENV)
    if raw is None:
        return DEFAULT_FAMILY_CAP
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{FAMILY_CAP_ENV} must be an integer, got {raw!r}")


@dataclass(frozen=True, eq=False)
class ProbabilityAssignment:
    """Candidate representing measure: exact rational value per event.

    Built from per-outcome values, so additivity and the boundary
    conditions hold by construction; :func:`verify_representation` still
    re-checks them against the stored values.
    """

    family: MeasurementFamily
    values: dict[EventRef, Fraction]

    @classmethod
    def from_singletons(
        cls,
        family: MeasurementFamily,
        singleton_values: dict[tuple[str, str], Fraction],
    ) -> "ProbabilityAssignment":
        """Extend per-outcome values additively over every event."""
        values: dict[EventRef, Fraction] = {}
        for mid in family.sorted_ids:
            m = family.by_id[mid]
            per_outcome = []
            for o in m.outcomes:
                if (mid, o) not in singleton_values:
                    raise ValueError(f"missing value for outcome {o!r} of {mid!r}")
                per_outcome.append(Fraction(singleton_values[(mid, o)]))
            sums = [Fraction(0)]
            for v in per_outcome:
                sums = sums + [s + v for s in sums]
            for mask in range(2 ** len(m.outcomes)):
                values[EventRef(mid, m.mask_event(mask))] = sums[mask]
        return cls(family, values)

    def value(self, ref: EventRef) -> Fraction:
        return self.values[ref]

    @cached_property
    def singletons(self) -> dict[tuple[str, str], Fraction]:
        out = {}
        for mid in self.family.sorted_ids:
            m = self.family.by_id[mid]
            for o in m.outcomes:
                out[(mid, o)] = self.values[EventRef(mid, frozenset({o}))]
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProbabilityAssignment):
            return NotImplemented
        same_family = self.family is other.family or self.family == other.family
        return same_family and self.values == other.values


def compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    """All ordered tuples of `parts` positive integers summing to `total`."""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def rich_family_size(K: int, max_outcomes: int) -> int:
    """Number of measurements in the rich family for (K, max_outcomes)."""
    return sum(math.comb(K - 1, n - 1) for n in range(1, min(K, max_outcomes) + 1))


def generate_rich_family(
    K: int, max_outcomes: int, cap: int | None = None
) -> MeasurementFamily:
    """Every measurement with weights (k1/K, ..., kn/K), n <= max_outcomes.

    One measurement per composition of K into n positive parts, for each
    n up to max_outcomes.  The uniform K-outcome measurement is included
    whenever max_outcomes >= K.  Raises :class:`SizeLimitExceeded` when
    the family would exceed the cap (default 10**6 measurements,
    overridable via the BORN_KERNEL_CAP environment variable).
    """
    if K < 1 or max_outcomes < 1:
        raise ValueError("K and max_outcomes must be positive")
    limit = family_size_cap() if cap is None else cap
    size = rich_family_size(K, max_outcomes)
    if size > limit:
        raise SizeLimitExceeded(
            f"rich family for K={K}, max_outcomes={max_outcomes} has {size} "
            f"measurements, exceeding the cap of {limit}"
        )
    measurements = []
    for n in range(1, min(K, max_outcomes) + 1):
        for parts in compositions(K, n):
            mid = "k" + "-".join(str(p) for p in parts)
            outcomes = tuple(f"o{i + 1}" for i in range(n))
            weights = tuple(Fraction(p, K) for p in parts)
            measurements.append(WeightedMeasurement(mid, outcomes, weights))
    return MeasurementFamily(tuple(measurements))


def uniform_measurement(K: int, id_prefix: str = "uniform") -> WeightedMeasurement:
    """The K-outcome measurement with every weight equal to 1/K."""
    return WeightedMeasurement(
        f"{id_prefix}-{K}",
        tuple(f"u{i + 1}" for i in range(K)),
        tuple(Fraction(1, K) for _ in range(K)),
    )


def _find_uniform(family: MeasurementFamily, K: int) -> WeightedMeasurement | None:
    target = Fraction(1, K)
    for m in family.measurements:
        if len(m.outcomes) == K and all(w == target for w in m.weights):
            return m
    return None


def derive_representation(
    ordering: LikelihoodOrdering, K: int
) -> ProbabilityAssignment:
    """Constructively derive the representing measure on the 1/K grid.

    Preconditions: the ordering passes all four axiom checks, its family
    contains a uniform K-outcome measurement, and every weight's
    denominator divides K.  The construction assigns 1/K to each uniform
    outcome (forced: they are judged equally likely and must sum to 1),
    forms blocks of uniform outcomes worth k/K, and transfers k/K to
    each outcome of matching weight through the ordering's own
    equal-likelihood judgments.
    """
    if K < 1:
        raise ValueError("K must be positive")
    family = ordering.family
    for check in ALL_CHECKS:
        report = check(ordering)
        if not report.satisfied:
            raise PreconditionViolated(report.axiom)
    uniform = _find_uniform(family, K)
    if uniform is None:
        raise MissingUniformMeasurement(
            f"family has no uniform {K}-outcome measurement"
        )
    for m in family.measurements:
        for w in m.weights:
            if K % w.denominator != 0:
                raise NonconformingDenominator(
                    f"weight {w} of measurement {m.id!r} does not live on the "
                    f"1/{K} grid"
                )

    singleton_values: dict[tuple[str, str], Fraction] = {}
    for mid in family.sorted_ids:
        m = family.by_id[mid]
        offset = 0
        for o, w in zip(m.outcomes, m.weights):
            k = w.numerator * (K // w.denominator)
            block = EventRef(uniform.id, frozenset(uniform.outcomes[offset:offset + k]))
            target = EventRef(mid, frozenset({o}))
            # Equal weight guarantees the ordering judged them alike; the
            # equivalence check above already certified this, so a failure
            # here means the ordering mutated underneath us.
            if not ordering.simeq(block, target):
                raise PreconditionViolated(
                    "Equivalence",
                    f"{target.label()} is not judged equal to its uniform block",
                )
            singleton_values[(mid, o)] = Fraction(k, K)
            offset += k
    return ProbabilityAssignment.from_singletons(family, singleton_values)


def _rank_vector(values: Sequence[Fraction]) -> np.ndarray:
    distinct = sorted(set(values))
    rank_of = {v: r for r, v in enumerate(distinct)}
    return np.array([rank_of[v] for v in values], dtype=np.int64)


def verify_representation(
    assignment: ProbabilityAssignment, ordering: LikelihoodOrdering
) -> tuple[bool, list[tuple]]:
    """Check the three representation conditions exactly.

    1. Boundary: value 0 on every empty event, 1 on every full outcome set.
    2. Additivity on disjoint events within each measurement.
    3. Order agreement: value(E) >= value(F) exactly when the ordering
       judges E at least as likely as F, over every ordered pair.

    Returns (ok, witnesses); every violating instance is reported, as
    (condition tag, refs...) tuples in canonical order.
    """
    if assignment.family is not ordering.family and not (
        assignment.family == ordering.family
    ):
        raise FamilyMismatch("assignment and ordering have different families")
    family = ordering.family
    witnesses: list[tuple] = []

    for mid in family.sorted_ids:
        m = family.by_id[mid]
        empty = EventRef(mid, frozenset())
        full = EventRef(mid, frozenset(m.outcomes))
        if assignment.value(empty) != 0:
            witnesses.append(("boundary", empty))
        if assignment.value(full) != 1:
            witnesses.append(("boundary", full))

    for mid in family.sorted_ids:
        m = family.by_id[mid]
        n_masks = 2 ** len(m.outcomes)
        vals = [assignment.value(EventRef(mid, m.mask_event(u))) for u in range(n_masks)]
        for union in range(n_masks):
            sub = union
            while True:
                other = union & ~sub
                if sub <= other and vals[union] != vals[sub] + vals[other]:
                    witnesses.append(
                        (
                            "additivity",
                            EventRef(mid, m.mask_event(sub)),
                            EventRef(mid, m.mask_event(other)),
                        )
                    )
                if sub == 0:
                    break
                sub = (sub - 1) & union

    refs = ordering.refs
    pr_ranks = _rank_vector([assignment.value(r) for r in refs])
    pr_matrix = pr_ranks[:, None] >= pr_ranks[None, :]
    mismatch = pr_matrix != ordering.matrix
    for i, j in zip(*np.nonzero(mismatch)):
        witnesses.append(("order", refs[int(i)], refs[int(j)]))

    witnesses.sort(
        key=lambda w: (w[0], tuple(ref_sort_key(family, r) for r in w[1:]))
    )
    return (not witnesses, witnesses)


def _measurement_candidates(
    ordering: LikelihoodOrdering, m: WeightedMeasurement, K: int
) -> list[tuple[int, ...]]:
    """Per-measurement singleton grids consistent with the ordering.

    Enumerates integer vectors v >= 0 with sum K, pruned during recursion
    by the ordering's judgments between singletons (and against the
    empty event), then filtered by full order agreement over the
    measurement's own event space.  These are exactly the restrictions
    to this measurement of the assignments the exhaustive definition
    would keep.
    """
    n = len(m.outcomes)
    n_masks = 2 ** n
    refs_by_mask = [EventRef(m.id, m.mask_event(mask)) for mask in range(n_masks)]
    idx = np.array([ordering.index[r] for r in refs_by_mask], dtype=np.intp)
    h_local = ordering.matrix[np.ix_(idx, idx)]

    single = [1 << i for i in range(n)]
    # Pairwise constraints between singletons: (ge, le) booleans.
    ge = [[bool(h_local[single[i], single[j]]) for j in range(n)] for i in range(n)]
    strict_positive = [
        not (h_local[0, single[i]] and h_local[single[i], 0]) for i in range(n)
    ]

    out: list[tuple[int, ...]] = []
    vec = [0] * n

    def recurse(i: int, remaining: int) -> None:
        if i == n:
            if remaining == 0:
                out.append(tuple(vec))
            return
        # A null singleton is pinned to 0; anything else needs value >= 1,
        # or the value order would merge it with the empty event.
        lo, hi = (1, remaining) if strict_positive[i] else (0, 0)
        for v in range(lo, hi + 1):
            ok = True
            for j in range(i):
                if ge[i][j] and not ge[j][i] and not (v > vec[j]):
                    ok = False
                elif ge[j][i] and not ge[i][j] and not (v < vec[j]):
                    ok = False
                elif ge[i][j] and ge[j][i] and v != vec[j]:
                    ok = False
                elif not ge[i][j] and not ge[j][i]:
                    # Incomparable singletons can never agree with a total
                    # value order; no candidate survives.
                    ok = False
                if not ok:
                    break
            if not ok:
                continue
            vec[i] = v
            recurse(i + 1, remaining - v)
        vec[i] = 0

    recurse(0, K)

    # Event-level filter: value order over this measurement's full event
    # space must reproduce the ordering's submatrix.
    masks = np.arange(n_masks, dtype=np.int64)
    membership = ((masks[:, None] >> np.arange(n)) & 1).astype(np.int64)
    survivors = []
    for v in out:
        vals = membership @ np.array(v, dtype=np.int64)
        if np.array_equal(vals[:, None] >= vals[None, :], h_local):
            survivors.append(v)
    return survivors


def uniqueness_search(
    ordering: LikelihoodOrdering,
    K: int,
    max_outcomes: int = MAX_SEARCH_OUTCOMES,
    max_measurements: int = MAX_SEARCH_MEASUREMENTS,
) -> list[ProbabilityAssignment]:
    """Every additive assignment on the 1/K grid representing the ordering.

    Exhausts all assignments with event values in {0, 1/K, ..., K/K}
    (equivalently: all nonnegative integer singleton vectors summing to
    K per measurement) and keeps those passing
    :func:`verify_representation`.  Enumeration prunes with necessary
    conditions only, and survivors are re-verified in full, so the
    result set matches the brute-force definition exactly.
    """
    if K < 1:
        raise ValueError("K must be positive")
    family = ordering.family
    if len(family.measurements) > max_measurements:
        raise SearchSpaceTooLarge(
            f"{len(family.measurements)} measurements exceed the cap of "
            f"{max_measurements}"
        )
    for m in family.measurements:
        if len(m.outcomes) > max_outcomes:
            raise SearchSpaceTooLarge(
                f"measurement {m.id!r} has {len(m.outcomes)} outcomes, "
                f"exceeding the cap of {max_outcomes}"
            )
        for w in m.weights:
            if K % w.denominator != 0:
                raise NonconformingDenominator(
                    f"weight {w} of measurement {m.id!r} does not live on the "
                    f"1/{K} grid"
                )

    mids = list(family.sorted_ids)
    per_measurement = {
        mid: _measurement_candidates(ordering, family.by_id[mid], K) for mid in mids
    }
    if any(not c for c in per_measurement.values()):
        return []

    # Join measurements one at a time, filtering on cross-measurement
    # order agreement as we go.
    joined_refs: list[EventRef] = []
    partials: list[tuple[tuple[int, ...], ...]] = [()]
    partial_vals: list[list[int]] = [[]]
    for mid in mids:
        m = family.by_id[mid]
        n_masks = 2 ** len(m.outcomes)
        refs_by_mask = [EventRef(mid, m.mask_event(mask)) for mask in range(n_masks)]
        masks = np.arange(n_masks, dtype=np.int64)
        membership = (
            (masks[:, None] >> np.arange(len(m.outcomes))) & 1
        ).astype(np.int64)
        if joined_refs:
            rows = np.array(
                [ordering.index[r] for r in refs_by_mask], dtype=np.intp
            )
            cols = np.array([ordering.index[r] for r in joined_refs], dtype=np.intp)
            h_new_old = ordering.matrix[np.ix_(rows, cols)]
            h_old_new = ordering.matrix[np.ix_(cols, rows)]
        new_partials = []
        new_vals = []
        for partial, old_vals in zip(partials, partial_vals):
            old_arr = np.array(old_vals, dtype=np.int64)
            for cand in per_measurement[mid]:
                vals = membership @ np.array(cand, dtype=np.int64)
                if joined_refs:
                    ge_new_old = vals[:, None] >= old_arr[None, :]
                    if not np.array_equal(ge_new_old, h_new_old):
                        continue
                    ge_old_new = old_arr[:, None] >= vals[None, :]
                    if not np.array_equal(ge_old_new, h_old_new):
                        continue
                new_partials.append(partial + (cand,))
                new_vals.append(old_vals + vals.tolist())
        partials = new_partials
        partial_vals = new_vals
        if len(partials) > MAX_SEARCH_PARTIALS:
            raise SearchSpaceTooLarge(
                f"partial assignment count {len(partials)} exceeds "
                f"{MAX_SEARCH_PARTIALS}"
            )
        if not partials:
            return []
        joined_refs.extend(refs_by_mask)

    results = []
    for partial in sorted(partials):
        singleton_values = {}
        for mid, cand in zip(mids, partial):
            m = family.by_id[mid]
            for o, v in zip(m.outcomes, cand):
                singleton_values[(mid, o)] = Fraction(v, K)
        assignment = ProbabilityAssignment.from_singletons(family, singleton_values)
        ok, _ = verify_representation(assignment, ordering)
        if ok:
            results.append(assignment)
    return results
