#!/usr/bin/env python3
"""Walk through the quantum layer: spectra, conventions, and weights.

A measurement is a state, an observable, and a convention mapping
outcome labels onto eigenvalues.  The weight of an event sums
<psi|P(x)|psi> over the eigenvalues its labels name.
"""
from fractions import Fraction

import numpy as np

from born_kernel import (
    MeasurementModel,
    StateVector,
    make_rich_measurement,
    rational_weight,
    spectral_decompose,
    weight,
)

# Decompose a spin-x operator: eigenvalues -1 and +1, eigenvectors on
# the diagonals of the Bloch sphere.
pauli_x = np.array([[0, 1], [1, 0]], dtype=complex)
obs = spectral_decompose(pauli_x)
print("spin-x eigenvalues:", obs.eigenvalues)
for value, proj in obs.spectral_pairs:
    print(f"  projector for {value:+.0f}:")
    print(np.round(proj.real, 3))

# Measure the equal superposition along z: both outcomes weigh 1/2.
plus_x = StateVector(np.array([1, 1], dtype=complex) / np.sqrt(2))
sigma_z = spectral_decompose(np.diag([1.0, -1.0]).astype(complex))
model = MeasurementModel(
    "z-spin", plus_x, sigma_z, ("up", "down"), {"up": 1.0, "down": -1.0}
)
print()
print("state (|+z> + |-z>)/sqrt(2) measured along z:")
for event in [set(), {"up"}, {"down"}, {"up", "down"}]:
    print(f"  weight({sorted(event) or '{}'}) = {weight(model, event):.12f}")

# The convention layer is not the spectrum: two labels may share an
# eigenvalue, and the event's image counts the eigenspace once.
aliased = MeasurementModel(
    "aliased",
    plus_x,
    sigma_z,
    ("a", "b", "c"),
    {"a": 1.0, "b": 1.0, "c": -1.0},
)
print()
print("two labels on one eigenvalue:")
print("  weight({a})    =", weight(aliased, {"a"}))
print("  weight({a,b})  =", weight(aliased, {"a", "b"}), "(not double counted)")

# Any finite rational weight vector is realizable as a diagonal model.
model = make_rich_measurement([Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)])
print()
print("rich measurement for (1/4, 1/4, 1/2):")
for i in range(3):
    exact = rational_weight(model, {f"o{i + 1}"}, max_den=64)
    print(f"  weight(o{i + 1}) = {weight(model, {f'o{i + 1}'}):.12f}  ->  exact {exact}")
