"""Invariant operator I(t) = A p^4 + B p^3 + C p^2 + D p + E x + F.

The coefficient trajectories come from integrating the *derived* constraint
system; the defining relation dI/dt + (1/i hbar)[I, H] = 0 and the constancy
of <I> along Schroedinger evolution are then checked numerically, with the
time derivative taken from the stored trajectories (fourth-order finite
differences) so that integration errors are visible rather than cancelled.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import AlgebraElement, PhysicalParams, commutator, hamiltonian
from .derive import derive_invariant_constraints
from .grid import WaveFunction, expectation
from .schedules import Schedule, TimeGrid, integrate_linear_system

DEFAULT_CONSTANTS = {"A": 1.0, "E": 1.0, "B0": 0.0, "C0": 0.0, "D0": 0.0, "F0": 0.0}


@dataclass(frozen=True)
class FrozenCoefficients:
    """The six coefficients at a single instant (input to the series solver)."""

    A: complex
    B: complex
    C: complex
    D: complex
    E: complex
    F: complex


@dataclass(frozen=True, eq=False)
class InvariantCoefficients:
    times: np.ndarray
    A: complex
    E: complex
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    F: np.ndarray
    B0: complex = 0j
    C0: complex = 0j
    D0: complex = 0j
    F0: complex = 0j

    def __post_init__(self) -> None:
        m = self.times.shape[0]
        for name in ("B", "C", "D", "F"):
            if getattr(self, name).shape != (m,):
                raise ValueError(f"trajectory {name} must have {m} samples")

    def at(self, j: int) -> FrozenCoefficients:
        return FrozenCoefficients(
            A=self.A, B=self.B[j], C=self.C[j], D=self.D[j], E=self.E, F=self.F[j]
        )

    def element_at(self, j: int) -> AlgebraElement:
        return AlgebraElement(
            c0=self.F[j],
            cx=self.E,
            cp=(self.D[j], self.C[j], self.B[j], self.A),
        )

    def hermiticity_defect(self) -> float:
        """Largest imaginary part over constants and trajectories."""
        return max(
            abs(self.A.imag),
            abs(self.E.imag),
            float(np.max(np.abs(self.B.imag))),
            float(np.max(np.abs(self.C.imag))),
            float(np.max(np.abs(self.D.imag))),
            float(np.max(np.abs(self.F.imag))),
        )


def solve_coefficients(
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
    """Integrate the derived system with the given integration constants."""
    table = derive_invariant_constraints(params)
    initial = [A, B0, C0, D0, E, F0]
    ys = integrate_linear_system(table, initial, schedule, grid)
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


# Fourth-order five-point first-derivative stencils (uniform spacing).
_STENCIL_INTERIOR = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_STENCIL_EDGE0 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
_STENCIL_EDGE1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0


def trajectory_derivative(values: np.ndarray, dt: float) -> np.ndarray:
    """d/dt of a sampled trajectory, O(dt^4) everywhere.

    Centered five-point stencils in the interior, one-sided five-point
    stencils at the two instants on each end.  Needs at least 5 samples.
    """
    y = np.asarray(values)
    m = y.shape[0]
    if m < 5:
        raise ValueError("need at least 5 samples for the derivative stencil")
    out = np.empty_like(y, dtype=complex)
    out[2:-2] = (
        _STENCIL_INTERIOR[0] * y[:-4]
        + _STENCIL_INTERIOR[1] * y[1:-3]
        + _STENCIL_INTERIOR[3] * y[3:-1]
        + _STENCIL_INTERIOR[4] * y[4:]
    )
    out[0] = _STENCIL_EDGE0 @ y[:5]
    out[1] = _STENCIL_EDGE1 @ y[:5]
    out[-1] = -(_STENCIL_EDGE0 @ y[-5:][::-1])
    out[-2] = -(_STENCIL_EDGE1 @ y[-5:][::-1])
    return out / dt


def invariance_residual(
    coeffs: InvariantCoefficients,
    schedule: Schedule,
    params: PhysicalParams,
    t: float,
) -> AlgebraElement:
    """dI/dt + (1/i hbar)[I, H] at a sample instant, as an operator.

    dI/dt uses the stencil derivative of the stored trajectories, so the
    residual detects both wrong constraint systems and integration error.
    """
    times = coeffs.times
    dt = times[1] - times[0]
    j = int(round(t / dt))
    if j < 0 or j >= times.shape[0] or abs(times[j] - t) > 1e-9 * max(1.0, times[-1]):
        raise ValueError(f"t = {t} is not a sample instant")
    dots = {
        name: trajectory_derivative(getattr(coeffs, name), dt)[j]
        for name in ("B", "C", "D", "F")
    }
    ddt = AlgebraElement(
        c0=dots["F"], cx=0.0, cp=(dots["D"], dots["C"], dots["B"], 0.0)
    )
    ih = 1j * params.hbar
    h_el = hamiltonian(params, float(schedule.evaluate(times[j])))
    return ddt + (1.0 / ih) * commutator(coeffs.element_at(j), h_el, params)


def residual_scan(
    coeffs: InvariantCoefficients,
    schedule: Schedule,
    params: PhysicalParams,
) -> np.ndarray:
    """Residual coefficient magnitudes at every instant, shape (m, 6)."""
    times = coeffs.times
    dt = times[1] - times[0]
    dots = {
        name: trajectory_derivative(getattr(coeffs, name), dt)
        for name in ("B", "C", "D", "F")
    }
    ih = 1j * params.hbar
    out = np.empty((times.shape[0], 6))
    for j, t in enumerate(times):
        ddt = AlgebraElement(
            c0=dots["F"][j], cx=0.0, cp=(dots["D"][j], dots["C"][j], dots["B"][j], 0.0)
        )
        h_el = hamiltonian(params, float(schedule.evaluate(t)))
        res = ddt + (1.0 / ih) * commutator(coeffs.element_at(j), h_el, params)
        out[j] = np.abs(res.coefficients())
    return out


def expectation_drift(
    psi_trajectory: Sequence[WaveFunction],
    coeffs: InvariantCoefficients,
    grid: TimeGrid,
) -> float:
    """max_j |<I(t_j)> - <I(0)>| / max(1, |<I(0)>|) along a state trajectory."""
    m = coeffs.times.shape[0]
    if len(psi_trajectory) != m or grid.n_steps + 1 != m:
        raise ValueError(
            f"trajectory length {len(psi_trajectory)} does not match the "
            f"{m}-instant grid"
        )
    values = [
        expectation(coeffs.element_at(j), psi)
        for j, psi in enumerate(psi_trajectory)
    ]
    ref = values[0]
    worst = max(abs(v - ref) for v in values)
    return worst / max(1.0, abs(ref))
