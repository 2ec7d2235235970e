"""Coefficient systems exactly as printed in the reference derivation.

These tables transcribe the published closed-form integrals verbatim and
exist ONLY so the discrepancy report can integrate them next to the derived
systems and quantify where the printed formulas break the defining relations
(non-invariance, non-unitary factors, nonzero Schroedinger residual).  No
computation outside the report path consumes them.

Differences from the derived systems, in d/dt form:

    invariant   Bdot:  A*f + E/(2 eta^3)        derived: 4*A*f - E/(2 eta^3)
                Cdot:  2*B*f                    derived: 3*B*f
                Ddot:  2*C*f + E/mu             derived: 2*C*f - E/mu
    propagator  g3dot: (-3i/hbar)*f*g2 - i/(2 hbar mu)
                                                derived: 3*f*g2 - i/(2 hbar mu)
                g6dot: i*hbar*g4                derived: f*g4

The printed Ddot divides E by an otherwise-undefined mass symbol; it is read
as the reduced mass here, which is the only mass the surrounding system uses.
The remaining rows agree with the derived systems.
"""

from __future__ import annotations

import numpy as np

from .algebra import PhysicalParams
from .derive import INVARIANT_SYMBOLS, PROPAGATOR_SYMBOLS, ConstraintTable, Poly
from .invariant import InvariantCoefficients
from .propagator import PropagatorFactors
from .schedules import Schedule, TimeGrid, integrate_linear_system


def published_invariant_table(params: PhysicalParams) -> ConstraintTable:
    half_eta3 = 1.0 / (2.0 * params.eta**3)
    rows = {
        "Adot": Poly.zero(),
        "Bdot": Poly({("A", "f"): 1.0, ("E",): half_eta3}),
        "Cdot": Poly({("B", "f"): 2.0}),
        "Ddot": Poly({("C", "f"): 2.0, ("E",): 1.0 / params.mu}),
        "Edot": Poly.zero(),
        "Fdot": Poly({("D", "f"): 1.0}),
    }
    return ConstraintTable("invariant-published", INVARIANT_SYMBOLS, rows)


def published_propagator_table(params: PhysicalParams) -> ConstraintTable:
    hbar = params.hbar
    rows = {
        "gamma1dot": Poly.const(-1j / (8.0 * hbar * params.eta**3)),
        "gamma2dot": Poly({("f", "gamma1"): 4.0}),
        "gamma3dot": Poly(
            {("f", "gamma2"): -3j / hbar, (): -1j / (2.0 * hbar * params.mu)}
        ),
        "gamma4dot": Poly({("f", "gamma3"): 2.0}),
        "gamma5dot": Poly({("f",): -1j / hbar}),
        "gamma6dot": Poly({("gamma4",): 1j * hbar}),
    }
    return ConstraintTable("propagator-published", PROPAGATOR_SYMBOLS, rows)


def published_invariant_coefficients(
    schedule: Schedule,
    params: PhysicalParams,
    grid: TimeGrid,
    *,
    A: complex = 1.0,
    E: complex = 1.0,
    B0: complex = 0.0,
    C0: complex = 0.0,
    D0: complex = 0.0,
    F0: complex = 0.0,
) -> InvariantCoefficients:
    """Trajectories of the published integral formulas (report path only)."""
    table = published_invariant_table(params)
    ys = integrate_linear_system(table, [A, B0, C0, D0, E, F0], schedule, grid)
    return InvariantCoefficients(
        times=grid.times(),
        A=complex(A),
        E=complex(E),
        B=ys[:, 1],
        C=ys[:, 2],
        D=ys[:, 3],
        F=ys[:, 5],
        B0=complex(B0),
        C0=complex(C0),
        D0=complex(D0),
        F0=complex(F0),
    )


def published_gammas(
    schedule: Schedule, params: PhysicalParams, grid: TimeGrid
) -> PropagatorFactors:
    """Factor trajectories of the published integral formulas, zero constants."""
    table = published_propagator_table(params)
    ys = integrate_linear_system(
        table, np.zeros(6, dtype=complex), schedule, grid
    )
    return PropagatorFactors(times=grid.times(), gammas=ys)
