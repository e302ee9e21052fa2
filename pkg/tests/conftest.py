"""Shared random-instance generators for the test suite.

Families are generated on exact rational grids: a measurement's weights
are a multinomial split of some denominator D, so every weight is k/D
and the decision kernel stays exact end to end.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from born_kernel import MeasurementFamily, WeightedMeasurement


def random_measurement(
    rng: np.random.Generator,
    mid: str,
    max_outcomes: int = 8,
    max_denominator: int = 64,
    positive: bool = False,
) -> WeightedMeasurement:
    n = int(rng.integers(1, max_outcomes + 1))
    den = int(rng.integers(max(1, n if positive else 1), max_denominator + 1))
    while True:
        parts = rng.multinomial(den, [1.0 / n] * n)
        if not positive or all(p > 0 for p in parts):
            break
    weights = tuple(Fraction(int(p), den) for p in parts)
    outcomes = tuple(f"o{i + 1}" for i in range(n))
    return WeightedMeasurement(mid, outcomes, weights)


def random_family(
    rng: np.random.Generator,
    max_measurements: int = 5,
    max_outcomes: int = 8,
    max_denominator: int = 64,
    positive: bool = False,
) -> MeasurementFamily:
    n = int(rng.integers(1, max_measurements + 1))
    return MeasurementFamily(
        tuple(
            random_measurement(
                rng, f"m{i + 1}", max_outcomes, max_denominator, positive
            )
            for i in range(n)
        )
    )


def grid_measurement(
    rng: np.random.Generator, mid: str, K: int, max_outcomes: int = 6
) -> WeightedMeasurement:
    """Measurement whose weights all live exactly on the 1/K grid."""
    n = int(rng.integers(1, max_outcomes + 1))
    parts = rng.multinomial(K, [1.0 / n] * n)
    weights = tuple(Fraction(int(p), K) for p in parts)
    outcomes = tuple(f"o{i + 1}" for i in range(n))
    return WeightedMeasurement(mid, outcomes, weights)


def lcm_of_denominators(family: MeasurementFamily) -> int:
    out = 1
    for m in family.measurements:
        for w in m.weights:
            out = out * w.denominator // math.gcd(out, w.denominator)
    return out
