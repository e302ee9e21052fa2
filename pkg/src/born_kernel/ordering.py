"""Likelihood orderings over quantum events and the rationality axioms.

A :class:`WeightedMeasurement` abstracts a measurement down to outcome
labels with exact rational weights.  A :class:`LikelihoodOrdering` is a
total two-place relation over (event, measurement) pairs, stored
extensionally as a boolean matrix so that every axiom verdict is
replayable.  The checkers make no assumption that the relation came from
weights: they accept arbitrary relations and report witnesses.

Axioms checked:

* Transitivity    -- a >= b and b >= c imply a >= c.
* Separation      -- some event is not null (null: judged equal to the
                     empty event of its own measurement).
* Dominance       -- growing an event never hurts it, and adding
                     outcomes matters exactly when the added part is
                     not null.
* Equivalence     -- events of exactly equal rational weight are judged
                     equally likely, whatever measurement they live in.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


def _exact_sum(values: Iterable[Fraction]) -> Fraction:
    """Sum many rationals by pooling numerators per denominator.

    Equivalent to repeated Fraction addition but linear in the input
    even for outcome lists with millions of entries.
    """
    num_by_den: dict[int, int] = {}
    for v in values:
        num_by_den[v.denominator] = num_by_den.get(v.denominator, 0) + v.numerator
    total = Fraction(0)
    for den, num in num_by_den.items():
        total += Fraction(num, den)
    return total


@dataclass(frozen=True)
class WeightedMeasurement:
    """Outcome labels with exact rational weights summing to 1."""

    id: str
    outcomes: tuple[str, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        outcomes = tuple(self.outcomes)
        weights = tuple(
            w if isinstance(w, Fraction) else Fraction(w) for w in self.weights
        )
        if not outcomes:
            raise ValueError("measurement needs at least one outcome")
        if len(outcomes) != len(weights):
            raise ValueError("outcomes and weights must be parallel lists")
        if len(set(outcomes)) != len(outcomes):
            raise ValueError(f"duplicate outcome labels in measurement {self.id!r}")
        if any(w < 0 for w in weights):
            raise ValueError("weights must be nonnegative")
        total = _exact_sum(weights)
        if total != 1:
            raise ValueError(
                f"weights of measurement {self.id!r} sum to {total}, not 1"
            )
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "weights", weights)

    @cached_property
    def _position(self) -> dict[str, int]:
        return {o: i for i, o in enumerate(self.outcomes)}

    def event_weight(self, event: Iterable[str]) -> Fraction:
        pos = self._position
        picked = []
        for o in set(event):
            if o not in pos:
                raise KeyError(f"unknown outcome {o!r} in measurement {self.id!r}")
            picked.append(self.weights[pos[o]])
        return _exact_sum(picked)

    def event_mask(self, event: Iterable[str]) -> int:
        pos = self._position
        mask = 0
        for o in event:
            if o not in pos:
                raise KeyError(f"unknown outcome {o!r} in measurement {self.id!r}")
            mask |= 1 << pos[o]
        return mask

    def mask_event(self, mask: int) -> frozenset[str]:
        return frozenset(
            o for i, o in enumerate(self.outcomes) if mask & (1 << i)
        )


@dataclass(frozen=True, eq=False)
class MeasurementFamily:
    """Finite set of weighted measurements with unique ids."""

    measurements: tuple[WeightedMeasurement, ...]

    def __post_init__(self) -> None:
        ms = tuple(self.measurements)
        if not ms:
            raise ValueError("family must contain at least one measurement")
        ids = [m.id for m in ms]
        if len(set(ids)) != len(ids):
            raise ValueError("measurement ids must be unique")
        object.__setattr__(self, "measurements", ms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MeasurementFamily):
            return NotImplemented
        return frozenset(self.measurements) == frozenset(other.measurements)

    def __hash__(self) -> int:
        return hash(frozenset(self.measurements))

    @cached_property
    def by_id(self) -> dict[str, WeightedMeasurement]:
        return {m.id: m for m in self.measurements}

    @cached_property
    def sorted_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.by_id))

    def __contains__(self, measurement_id: str) -> bool:
        return measurement_id in self.by_id

    def event_count(self) -> int:
        return sum(2 ** len(m.outcomes) for m in self.measurements)


@dataclass(frozen=True)
class EventRef:
    """An event tied to the measurement it belongs to."""

    measurement_id: str
    event: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "event", frozenset(self.event))

    def label(self) -> str:
        return "{" + ",".join(sorted(self.event)) + "}|" + self.measurement_id


def ref_sort_key(family: MeasurementFamily, ref: EventRef) -> tuple[str, int]:
    """Canonical (measurement id, event bitmask) key for stable reports."""
    return (ref.measurement_id, family.by_id[ref.measurement_id].event_mask(ref.event))


def enumerate_event_refs(family: MeasurementFamily) -> tuple[EventRef, ...]:
    """Every (event, measurement) pair, in canonical order."""
    refs: list[EventRef] = []
    for mid in family.sorted_ids:
        m = family.by_id[mid]
        for mask in range(2 ** len(m.outcomes)):
            refs.append(EventRef(mid, m.mask_event(mask)))
    return tuple(refs)


def event_weights(family: MeasurementFamily) -> dict[EventRef, Fraction]:
    """Exact weight of every event in the family's total event space."""
    out: dict[EventRef, Fraction] = {}
    for mid in family.sorted_ids:
        m = family.by_id[mid]
        # Subset sums over the integer numerators on the measurement's
        # common denominator, doubling one outcome at a time.  Plain
        # Python ints: denominators may exceed any fixed-width type.
        den = 1
        for w in m.weights:
            den = den * w.denominator // math.gcd(den, w.denominator)
        nums = [0]
        for w in m.weights:
            step = w.numerator * (den // w.denominator)
            nums = nums + [n + step for n in nums]
        for mask in range(2 ** len(m.outcomes)):
            out[EventRef(mid, m.mask_event(mask))] = Fraction(nums[mask], den)
    return out


@dataclass(frozen=True, eq=False)
class LikelihoodOrdering:
    """Total two-place relation over the family's event space.

    ``matrix[i, j]`` is True exactly when ``refs[i]`` is judged at least
    as likely as ``refs[j]``.  The derived relations: equal likelihood
    means both directions hold, strict means forward holds and equal
    fails.  No axiom is assumed; conformance is what the checkers test.
    """

    family: MeasurementFamily
    refs: tuple[EventRef, ...]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=bool)
        n = len(self.refs)
        if m.shape != (n, n):
            raise ValueError(f"matrix shape {m.shape} does not match {n} event refs")
        m = np.array(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @cached_property
    def index(self) -> dict[EventRef, int]:
        return {r: i for i, r in enumerate(self.refs)}

    def _i(self, ref: EventRef) -> int:
        try:
            return self.index[ref]
        except KeyError:
            raise KeyError(f"{ref.label()} is not in this ordering's event space")

    def holds(self, a: EventRef, b: EventRef) -> bool:
        """a at-least-as-likely-as b."""
        return bool(self.matrix[self._i(a), self._i(b)])

    def simeq(self, a: EventRef, b: EventRef) -> bool:
        """Equal likelihood: the relation holds both ways."""
        i, j = self._i(a), self._i(b)
        return bool(self.matrix[i, j] and self.matrix[j, i])

    def strictly(self, a: EventRef, b: EventRef) -> bool:
        """Strictly more likely: forward holds, equality fails."""
        i, j = self._i(a), self._i(b)
        return bool(self.matrix[i, j] and not self.matrix[j, i])

    def empty_ref(self, measurement_id: str) -> EventRef:
        return EventRef(measurement_id, frozenset())

    def is_null(self, ref: EventRef) -> bool:
        """Null: judged equal to the empty event of its own measurement."""
        return self.simeq(ref, self.empty_ref(ref.measurement_id))


# Extensional relations are n x n boolean matrices over the total event
# space; refuse sizes where that stops being a desk-scale object.
MAX_EXTENSIONAL_EVENTS = 20_000


def _check_event_space_size(family: MeasurementFamily) -> None:
    n = family.event_count()
    if n > MAX_EXTENSIONAL_EVENTS:
        raise ValueError(
            f"family has {n} events; extensional orderings are capped at "
            f"{MAX_EXTENSIONAL_EVENTS} (a measurement with k outcomes "
            f"contributes 2**k events)"
        )


def _ordering_from_scores(
    family: MeasurementFamily,
    refs: Sequence[EventRef],
    scores: Sequence,
) -> LikelihoodOrdering:
    """Total preorder: ref a >= ref b iff score(a) >= score(b)."""
    distinct = sorted(set(scores))
    rank_of = {s: r for r, s in enumerate(distinct)}
    ranks = np.array([rank_of[s] for s in scores], dtype=np.int64)
    matrix = ranks[:, None] >= ranks[None, :]
    return LikelihoodOrdering(family, tuple(refs), matrix)


def induced_ordering(family: MeasurementFamily) -> LikelihoodOrdering:
    """The ordering the weight function induces: compare exact weights.

    By construction the result is total, transitive, and judges
    equal-weight events equally likely.
    """
    _check_event_space_size(family)
    refs = enumerate_event_refs(family)
    weights = event_weights(family)
    return _ordering_from_scores(family, refs, [weights[r] for r in refs])


def outcome_count_ordering(family: MeasurementFamily) -> LikelihoodOrdering:
    """Negative control: rank events by their count of positive-weight outcomes.

    A deliberately weight-blind rule.  It is total and transitive but
    generically violates the equivalence of equal-weight events.
    """
    _check_event_space_size(family)
    refs = enumerate_event_refs(family)
    counts = []
    for r in refs:
        m = family.by_id[r.measurement_id]
        counts.append(
            sum(1 for o in r.event if m.weights[m._position[o]] > 0)
        )
    return _ordering_from_scores(family, refs, counts)


@dataclass(frozen=True)
class AxiomReport:
    """Verdict of one axiom check with replayable witnesses.

    ``witnesses`` holds violating tuples of event refs and is empty
    exactly when the axiom is satisfied.  For the existential Separation
    axiom, ``evidence`` carries a non-null event when satisfied, and the
    witnesses on failure are the events (all of them) that replay as
    null.
    """

    axiom: str
    satisfied: bool
    witnesses: tuple[tuple[EventRef, ...], ...]
    evidence: EventRef | None = None


def _sorted_witnesses(
    family: MeasurementFamily, witnesses: Iterable[tuple[EventRef, ...]]
) -> tuple[tuple[EventRef, ...], ...]:
    return tuple(
        sorted(witnesses, key=lambda w: tuple(ref_sort_key(family, r) for r in w))
    )


def check_transitivity(ordering: LikelihoodOrdering) -> AxiomReport:
    """Check a >= b and b >= c imply a >= c over all triples.

    The composition test runs as an exact boolean matrix product; for
    each (a, c) pair reached through some middle event but not related
    directly, one witnessing triple (a, b, c) is reported.
    """
    h = ordering.matrix
    reach = (h.astype(np.float32) @ h.astype(np.float32)) > 0
    bad = reach & ~h
    witnesses = []
    for i, k in zip(*np.nonzero(bad)):
        middles = np.nonzero(h[i, :] & h[:, k])[0]
        j = int(middles[0])
        witnesses.append((ordering.refs[int(i)], ordering.refs[j], ordering.refs[int(k)]))
    return AxiomReport(
        "Transitivity",
        satisfied=not witnesses,
        witnesses=_sorted_witnesses(ordering.family, witnesses),
    )


def check_separation(ordering: LikelihoodOrdering) -> AxiomReport:
    """Check that some event is not null."""
    null_flags = []
    evidence = None
    for ref in ordering.refs:
        if ordering.is_null(ref):
            null_flags.append((ref,))
        elif evidence is None:
            evidence = ref
    if evidence is not None:
        return AxiomReport("Separation", True, (), evidence=evidence)
    return AxiomReport(
        "Separation", False, _sorted_witnesses(ordering.family, null_flags)
    )


def check_dominance(ordering: LikelihoodOrdering) -> AxiomReport:
    """Check E subset-of F implies F >= E, with equality iff F minus E is null.

    Runs over every nested event pair of every measurement (submask
    enumeration).  A witness is the offending (E, F) pair.
    """
    family = ordering.family
    h = ordering.matrix
    witnesses = []
    for mid in family.sorted_ids:
        m = family.by_id[mid]
        n_masks = 2 ** len(m.outcomes)
        refs_by_mask = [EventRef(mid, m.mask_event(mask)) for mask in range(n_masks)]
        idx = np.array([ordering.index[r] for r in refs_by_mask], dtype=np.intp)
        empty_i = idx[0]
        null_by_mask = (h[idx, empty_i] & h[empty_i, idx]).tolist()
        h_local = h[np.ix_(idx, idx)]
        for f_mask in range(n_masks):
            row = h_local[f_mask]
            col = h_local[:, f_mask]
            e_mask = f_mask
            while True:
                if not row[e_mask]:
                    witnesses.append((refs_by_mask[e_mask], refs_by_mask[f_mask]))
                elif bool(col[e_mask]) != null_by_mask[f_mask & ~e_mask]:
                    witnesses.append((refs_by_mask[e_mask], refs_by_mask[f_mask]))
                if e_mask == 0:
                    break
                e_mask = (e_mask - 1) & f_mask
    return AxiomReport(
        "Dominance",
        satisfied=not witnesses,
        witnesses=_sorted_witnesses(family, witnesses),
    )


def check_equivalence(ordering: LikelihoodOrdering) -> AxiomReport:
    """Check that events of exactly equal weight are judged equally likely.

    Weight equality is decided in exact rational arithmetic against the
    family's weights; the ordering is then required to relate every such
    pair in both directions.
    """
    weights = event_weights(ordering.family)
    groups: dict[Fraction, list[int]] = {}
    for i, ref in enumerate(ordering.refs):
        groups.setdefault(weights[ref], []).append(i)
    h = ordering.matrix
    witnesses = []
    for idx in groups.values():
        if len(idx) < 2:
            continue
        block = h[np.ix_(idx, idx)]
        if block.all():
            continue
        for a, b in zip(*np.nonzero(~block)):
            i, j = idx[int(a)], idx[int(b)]
            witnesses.append((ordering.refs[i], ordering.refs[j]))
    return AxiomReport(
        "Equivalence",
        satisfied=not witnesses,
        witnesses=_sorted_witnesses(ordering.family, witnesses),
    )


ALL_CHECKS = (
    check_transitivity,
    check_separation,
    check_dominance,
    check_equivalence,
)


def run_all_checks(ordering: LikelihoodOrdering) -> tuple[AxiomReport, ...]:
    return tuple(check(ordering) for check in ALL_CHECKS)


def null_events(ordering: LikelihoodOrdering) -> set[EventRef]:
    """All events judged equal to the empty event of their measurement."""
    return {ref for ref in ordering.refs if ordering.is_null(ref)}


def replay_witness(
    ordering: LikelihoodOrdering, axiom: str, witness: tuple[EventRef, ...]
) -> bool:
    """Re-verify that a reported witness is still a violation.

    Returns True when the witness replays as a genuine violation of the
    named axiom (for Separation: when the event replays as null).
    """
    if axiom == "Transitivity":
        a, b, c = witness
        return (
            ordering.holds(a, b)
            and ordering.holds(b, c)
            and not ordering.holds(a, c)
        )
    if axiom == "Separation":
        (ref,) = witness
        return ordering.is_null(ref)
    if axiom == "Dominance":
        e, f = witness
        m = ordering.family.by_id[e.measurement_id]
        if not e.event <= f.event:
            return False
        if not ordering.holds(f, e):
            return True
        diff = EventRef(e.measurement_id, f.event - e.event)
        return ordering.simeq(f, e) != ordering.is_null(diff)
    if axiom == "Equivalence":
        a, b = witness
        weights = event_weights(ordering.family)
        return weights[a] == weights[b] and not ordering.simeq(a, b)
    raise ValueError(f"unknown axiom {axiom!r}")
