#!/usr/bin/env python3
"""Splitting one branch into many changes no coarse probability.

A hidden randomizer that multiplies the heads branch a million-fold adds
outcomes but no decision-relevant structure: the refined suboutcomes
split the weight exactly, and the derived probability of every
pre-existing event is unchanged.
"""
from fractions import Fraction

from born_kernel import (
    MeasurementFamily,
    RefinementSpec,
    WeightedMeasurement,
    coarse_event_probability_invariance,
    refine,
)

coin = WeightedMeasurement(
    "coin", ("heads", "tails"), (Fraction(1, 2), Fraction(1, 2))
)

print("refine heads into 4 suboutcomes:")
split = refine(coin, "heads", 4)
for o, w in zip(split.outcomes, split.weights):
    print(f"  {o}: {w}")
print("  heads image weight:",
      split.event_weight(o for o in split.outcomes if o.startswith("heads_")))

print()
print("million-fold refinement (exact rational arithmetic):")
big = refine(coin, "heads", 10**6)
coarse = big.event_weight(o for o in big.outcomes if o != "tails")
print(f"  {len(big.outcomes)} outcomes, each heads suboutcome {big.weights[0]}")
print(f"  coarse heads event still weighs {coarse}")

print()
print("derived probability before vs after refinement:")
# The derivation pads the family with the uniform grid witness, whose
# event space is 2^(K*parts): keep the refined grid at desk scale.
family = MeasurementFamily((coin,))
for parts in (1, 2, 3, 5):
    spec = RefinementSpec("coin", "heads", parts)
    invariant = coarse_event_probability_invariance(family, spec, K=2)
    print(f"  parts = {parts}: coarse probabilities unchanged -> {invariant}")
