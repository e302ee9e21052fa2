#!/usr/bin/env python3
"""Shift unitaries between preparation and measurement; relabel results.

Neither move changes anything an agent could care about, and chaining
them maps every bet onto a two-dimensional normal form c|0> + d|1> with
c^2 equal to the event weight.  Equivalence classes under the two moves
are therefore characterized by weight alone.
"""
import numpy as np

from born_kernel import (
    MeasurementQuadruple,
    StateVector,
    canonical_form,
    canonical_quadruple,
    relabel,
    same_equivalence_class,
    spectral_decompose,
    unitary_transform,
)

# A bet on spin-up for the equal superposition measured along z.
plus_x = StateVector(np.array([1, 1], dtype=complex) / np.sqrt(2))
sigma_z = spectral_decompose(np.diag([1.0, -1.0]).astype(complex))
bet = MeasurementQuadruple(plus_x, sigma_z, frozenset({1.0}))
print("original bet: dim", bet.dim, "event", sorted(bet.event),
      "weight", f"{bet.event_weight():.6f}")

# Bookkeeping move 1: a precession of the state can instead be read as
# part of the measurement device.  Spin it with a rotation and measure
# the conjugated observable: same physical process, same weight.
theta = 1.1
rot = np.array(
    [[np.cos(theta / 2), -np.sin(theta / 2)],
     [np.sin(theta / 2), np.cos(theta / 2)]],
    dtype=complex,
)
rotated_obs = spectral_decompose(rot @ sigma_z.dense() @ rot.conj().T)
moved = unitary_transform(bet, rot, rotated_obs)
print("after unitary shift: weight", f"{moved.event_weight():.6f}",
      "same class:", same_equivalence_class(bet, moved))

# Bookkeeping move 2: renaming the pointer readings.  Mapping the event
# to 0 and everything else to 1 turns any bet into a binary one.
binary = relabel(bet, lambda x: 0.0 if x in bet.event else 1.0)
print("after indicator relabel: spectrum", binary.observable.eigenvalues,
      "event", sorted(binary.event), "weight", f"{binary.event_weight():.6f}")

# The two moves compose into the normal form.
form = canonical_form(bet)
print()
print(f"normal form: weight = {form.weight_value:.12g}, "
      f"c = {form.c:.12g}, d = {form.d:.12g}")
canon = canonical_quadruple(bet)
print("as a quadruple: dim", canon.dim, "event", sorted(canon.event),
      "state", np.round(canon.state.components.real, 6))

# A three-dimensional bet with the same weight lands on the same form.
other = MeasurementQuadruple(
    StateVector(np.array([np.sqrt(0.5), 0.5, 0.5], dtype=complex)),
    spectral_decompose(np.diag([1.0, 2.0, 3.0]).astype(complex)),
    frozenset({1.0}),
)
print()
print("3-dim bet, weight", f"{other.event_weight():.6f}",
      "-> same class as the 2-dim bet:", same_equivalence_class(bet, other))
