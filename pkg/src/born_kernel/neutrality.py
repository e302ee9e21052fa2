"""Measurement-neutrality transforms and the two-dimensional normal form.

A bet on a quantum measurement is an ordered quadruple: an event (a set
of eigenvalues), a Hilbert-space dimension, a prepared state, and the
measured observable.  Two physically interchangeable descriptions arise
from (a) shifting a unitary between preparation and measurement
(intertwining transform) and (b) renaming the results (relabeling).
Chaining an indicator relabeling with an intertwiner maps any quadruple
onto a two-dimensional normal form c|0> + d|1> betting on eigenvalue 0,
with c^2 equal to the event weight, so the equivalence classes carved
out by the two transforms are characterized by weight alone.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .numeric import DEFAULT_POLICY, NumericPolicy
from .quantum import Observable, StateVector


def _max_abs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


class NotUnitary(ValueError):
    """Transform matrix fails the isometry check."""


class IntertwiningFails(ValueError):
    """Transform does not intertwine the two observables."""


@dataclass(frozen=True, eq=False)
class MeasurementQuadruple:
    """Event, dimension, state, observable: one bet on one measurement.

    The event is a subset of the observable's eigenvalues; members are
    snapped onto the spectrum at construction (within the eigenvalue
    tolerance) so later comparisons are exact.
    """

    state: StateVector
    observable: Observable
    event: frozenset[float]

    def __post_init__(self) -> None:
        if self.state.dim != self.observable.dim:
            raise ValueError("state and observable dimensions differ")
        tol = self.observable.policy.eigenvalue_tol
        snapped = set()
        for x in self.event:
            matches = [v for v in self.observable.eigenvalues if abs(v - x) <= tol]
            if not matches:
                raise ValueError(f"event value {x} is not an eigenvalue")
            snapped.add(matches[0])
        object.__setattr__(self, "event", frozenset(snapped))

    @property
    def dim(self) -> int:
        return self.state.dim

    def event_weight(self) -> float:
        """Summed weight <psi|P(x)|psi> over the event's eigenvalues."""
        psi = self.state.components
        total = 0.0
        for x in self.event:
            p = self.observable.projector(x)
            total += float(np.real(psi.conj() @ (p @ psi)))
        return min(1.0, max(0.0, total))


@dataclass(frozen=True)
class CanonicalForm:
    """Two-dimensional normal form of a quadruple: weight and (c, d).

    c and d are the nonnegative amplitudes of the normal-form state
    c|0> + d|1>, with c^2 equal to the event weight.
    """

    weight_value: float
    c: float
    d: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.weight_value <= 1.0):
            raise ValueError("weight must lie in [0, 1]")
        if self.c < 0 or self.d < 0:
            raise ValueError("canonical amplitudes are nonnegative")
        if abs(self.c**2 + self.d**2 - 1.0) > 1e-10:
            raise ValueError("canonical amplitudes must normalize")
        if abs(self.c**2 - self.weight_value) > 1e-10:
            raise ValueError("c^2 must equal the weight")


def unitary_transform(
    q: MeasurementQuadruple,
    U: np.ndarray,
    new_observable: Observable,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> MeasurementQuadruple:
    """Move a unitary from the preparation side to the measurement side.

    U maps the quadruple's space into the new observable's space and
    must satisfy U X = X' U (operator composition order: X acts first).
    The returned quadruple keeps the same event, carries the transported
    state U|psi>, and has the same event weight within tolerance.
    """
    u = np.asarray(U, dtype=np.complex128)
    dim_out, dim_in = u.shape
    if dim_in != q.dim:
        raise ValueError(f"transform expects dimension {dim_in}, quadruple has {q.dim}")
    if dim_out != new_observable.dim:
        raise ValueError("transform output dimension does not match new observable")
    tol = policy.projector_tol
    residual = _max_abs(u.conj().T @ u - np.eye(dim_in))
    if residual > tol:
        raise NotUnitary(
            f"max |U^dag U - I| = {residual:.3e} exceeds {tol:.3e}"
        )
    lhs = u @ q.observable.dense()
    rhs = new_observable.dense() @ u
    residual = _max_abs(lhs - rhs)
    if residual > tol:
        raise IntertwiningFails(
            f"max |U X - X' U| = {residual:.3e} exceeds {tol:.3e}"
        )
    new_state = StateVector(u @ q.state.components, policy=policy)
    return MeasurementQuadruple(new_state, new_observable, q.event)


def relabel(
    q: MeasurementQuadruple,
    f: Mapping[float, float] | Callable[[float], float],
    policy: NumericPolicy = DEFAULT_POLICY,
) -> MeasurementQuadruple:
    """Rename results through f, merging eigenspaces that collide.

    The new observable's eigenspace for value z is the sum of the
    projectors of every x with f(x) = z; the new event is the image
    f(E).  The image event's weight can only grow: it is unchanged
    exactly when f pulls f(E) back onto E (in particular whenever f is
    injective on the spectrum).
    """
    if callable(f):
        mapping = {x: float(f(x)) for x in q.observable.eigenvalues}
    else:
        mapping = {x: float(f[x]) for x in q.observable.eigenvalues}
    merged: dict[float, np.ndarray] = {}
    for x, p in q.observable.spectral_pairs:
        z = mapping[x]
        # Snap near-identical relabeled values onto one representative.
        for existing in merged:
            if abs(existing - z) <= policy.eigenvalue_tol:
                z = existing
                break
        merged[z] = merged.get(z, 0) + p
    new_observable = Observable(
        tuple(sorted(merged.items())), policy=q.observable.policy
    )
    new_event = frozenset(mapping[x] for x in q.event)
    return MeasurementQuadruple(q.state, new_observable, new_event)


def _indicator_relabeled(q: MeasurementQuadruple) -> MeasurementQuadruple:
    """Relabel results to 0 on the event and 1 off it."""
    f = {x: (0.0 if x in q.event else 1.0) for x in q.observable.eigenvalues}
    return relabel(q, f)


def canonical_form(
    q: MeasurementQuadruple, policy: NumericPolicy = DEFAULT_POLICY
) -> CanonicalForm:
    """Collapse a quadruple to its two-dimensional normal form.

    Applies the indicator relabeling, splits the state across the binary
    observable's two eigenspaces, and reads off the nonnegative
    amplitudes (c, d) the intertwiner onto the plane spanned by |0>, |1>
    would produce.  The output depends on the input only through the
    event weight; degenerate weights 0 and 1 are admitted with c or d
    equal to zero.
    """
    binary = _indicator_relabeled(q)
    psi = binary.state.components
    if 0.0 in binary.event:
        p0 = binary.observable.projector(0.0)
        c = float(np.linalg.norm(p0 @ psi))
    else:
        c = 0.0
    c = min(1.0, max(0.0, c))
    w = c * c
    d = float(np.sqrt(max(0.0, 1.0 - w)))
    return CanonicalForm(weight_value=w, c=c, d=d)


def canonical_quadruple(
    q: MeasurementQuadruple, policy: NumericPolicy = DEFAULT_POLICY
) -> MeasurementQuadruple:
    """The normal form as an actual two-dimensional quadruple.

    State c|0> + d|1>, observable with eigenvalue 0 on |0> and 1 on |1>,
    betting on eigenvalue 0.
    """
    form = canonical_form(q, policy=policy)
    state = StateVector(
        np.array([form.c, form.d], dtype=np.complex128), policy=policy
    )
    observable = Observable(
        (
            (0.0, np.array([[1.0, 0.0], [0.0, 0.0]], dtype=np.complex128)),
            (1.0, np.array([[0.0, 0.0], [0.0, 1.0]], dtype=np.complex128)),
        ),
        policy=policy,
    )
    return MeasurementQuadruple(state, observable, frozenset({0.0}))


def same_equivalence_class(
    q1: MeasurementQuadruple,
    q2: MeasurementQuadruple,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> bool:
    """Whether two quadruples share a normal form.

    True exactly when their event weights agree within tolerance; the
    two transform families can turn one into the other precisely then.
    """
    f1 = canonical_form(q1, policy=policy)
    f2 = canonical_form(q2, policy=policy)
    return abs(f1.weight_value - f2.weight_value) <= policy.projector_tol
