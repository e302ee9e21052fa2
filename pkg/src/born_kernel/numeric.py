"""Shared tolerance policy for the floating-point layer.

All Hilbert-space computations (states, projectors, weights) run in
floating point against these tolerances.  The decision kernel never
consults them: everything at the theorem level is exact rational
arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class NumericPolicy:
    """Tolerance record threaded through the floating-point operations.

    norm_tol        -- state normalization and amplitude bookkeeping
    projector_tol   -- projector algebra, unitarity checks, weight comparisons
    eigenvalue_tol  -- eigenvalue clustering and event/eigenvalue matching
    rational_tol    -- maximum gap tolerated when snapping a float weight to
                       a bounded-denominator rational
    """

    norm_tol: float = 1e-12
    projector_tol: float = 1e-10
    eigenvalue_tol: float = 1e-9
    rational_tol: float = 1e-9


DEFAULT_POLICY = NumericPolicy()
