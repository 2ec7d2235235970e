"""Evolution operator as an ordered exponential product, plus two independent
propagation oracles and the residual checks that compare all three.

The ordered product

    U(t) = exp(g1 p^4) exp(g2 p^3) exp(g3 p^2) exp(g4 p) exp(g5 x) exp(g6)

is the unique reading of a single-exponential ansatz under which the
first-order factor equations close exactly (a genuine single exponential
would generate extra [G, Gdot] correction terms).  For real drives every
derived g_i is purely imaginary, each factor is a unit-modulus multiplier and
U is exactly unitary on the grid.

The exact oracle solves the momentum-representation transport problem by
characteristics: psi~(p, t) = psi~(p + F(t), 0) * exp(-i Theta(p, t)/hbar)
with Theta(p, t) = int_0^t T(p + F(t) - F(s)) ds, a degree-4 polynomial in p
whose coefficients are binomial combinations of the moments
M_k = int_0^t (F(t) - F(s))^k ds.  The momentum shift is realized as a
position-space phase, so no grid interpolation ever happens.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .algebra import PhysicalParams, hamiltonian
from .derive import ConstraintTable, derive_propagator_constraints
from .grid import (
    POSITION,
    SpatialGrid,
    WaveFunction,
    _forward_values,
    _inverse_values,
    apply_element,
    inner_product,
    norm,
)
from .schedules import CONSTANT, LINEAR, Schedule, TimeGrid, integrate_linear_system

PHASE_WRAP_THRESHOLD = 1.0e3


class PhaseWrapWarning(UserWarning):
    """Kinetic phase advanced by more than PHASE_WRAP_THRESHOLD radians per step."""


@dataclass(frozen=True, eq=False)
class PropagatorFactors:
    """Trajectories of the six factor functions; U(0) is the identity."""

    times: np.ndarray
    gammas: np.ndarray  # shape (n_instants, 6)

    def __post_init__(self) -> None:
        if self.gammas.shape != (self.times.shape[0], 6):
            raise ValueError("gammas must have shape (n_instants, 6)")

    def instant_index(self, t: float) -> int:
        times = self.times
        if times.shape[0] == 1:
            j = 0
        else:
            dt = times[1] - times[0]
            j = int(round(t / dt))
        if j < 0 or j >= times.shape[0] or abs(times[j] - t) > 1e-9 * max(1.0, times[-1]):
            raise ValueError(f"t = {t} is not a sample instant of the factor grid")
        return j

    def at(self, t: float) -> np.ndarray:
        return self.gammas[self.instant_index(t)]

    def max_real_part(self) -> float:
        """Unitarity witness: exactly 0 for real drives and the derived system."""
        return float(np.max(np.abs(self.gammas.real)))


def solve_gammas(
    schedule: Schedule, params: PhysicalParams, grid: TimeGrid,
    table: ConstraintTable | None = None,
) -> PropagatorFactors:
    """Integrate the derived factor system with zero initial conditions."""
    if table is None:
        table = derive_propagator_constraints(params)
    ys = integrate_linear_system(table, np.zeros(6, dtype=complex), schedule, grid)
    return PropagatorFactors(times=grid.times(), gammas=ys)


def _apply_gamma_values(
    grid: SpatialGrid, gamma: np.ndarray, values: np.ndarray
) -> np.ndarray:
    """U(t) applied to position samples for one factor vector."""
    g1, g2, g3, g4, g5, g6 = gamma
    out = values * np.exp(g6 + g5 * grid.x)
    mom = _forward_values(grid, out)
    p = grid.p
    mom = mom * np.exp(((g1 * p + g2) * p + g3) * p * p + g4 * p)
    return _inverse_values(grid, mom)


def apply(factors: PropagatorFactors, psi0: WaveFunction, t: float) -> WaveFunction:
    """U(t) psi0 on the grid; psi0 must be in position representation.

    Factor order: the scalar and the x factor act first (pointwise in
    position space), then the combined p factor acts pointwise in momentum
    space.  All multipliers are unit modulus for real drives, so the grid
    norm is conserved to rounding.
    """
    if psi0.representation != POSITION:
        raise ValueError("apply expects a position-representation state")
    gamma = factors.at(t)
    return WaveFunction(
        _apply_gamma_values(psi0.grid, gamma, psi0.values), POSITION, psi0.grid
    )


def drive_moments(
    schedule: Schedule, t: float, n_quad: int = 256
) -> np.ndarray:
    """Moments M_k = int_0^t (F(t) - F(s))^k ds for k = 0..4.

    Closed forms for the constant preset, exact polynomial integration for
    the linear preset, composite Simpson otherwise (the single error source
    of the characteristics oracle).
    """
    if n_quad < 16:
        raise ValueError(f"n_quad must be >= 16, got {n_quad}")
    if t == 0.0:
        return np.zeros(5)
    if schedule.kind == CONSTANT:
        f0 = schedule.f0
        return np.array([f0**k * t ** (k + 1) / (k + 1) for k in range(5)])
    if schedule.kind == LINEAR:
        # F(t) - F(s) is the quadratic polynomial F(t) - f0*s - f1*s^2/2 in s.
        g = np.array([schedule.antiderivative(t), -schedule.f0, -0.5 * schedule.f1])
        out = np.empty(5)
        for k in range(5):
            gk = npoly.polypow(g, k) if k > 0 else np.array([1.0])
            anti = npoly.polyint(gk)
            out[k] = npoly.polyval(t, anti) - npoly.polyval(0.0, anti)
        return out
    panels = n_quad + (n_quad % 2)
    s = np.linspace(0.0, t, panels + 1)
    g = schedule.antiderivative(t) - schedule.antiderivative(s)
    weights = np.ones(panels + 1)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    weights *= (t / panels) / 3.0
    return np.array([np.sum(weights * g**k) for k in range(5)])


def characteristics_phase_coefficients(
    schedule: Schedule, params: PhysicalParams, t: float, n_quad: int = 256
) -> np.ndarray:
    """Coefficients (theta_0..theta_4) of the accumulated kinetic phase
    Theta(p, t) = sum_k theta_k p^k."""
    m = drive_moments(schedule, t, n_quad)
    c4 = params.quartic_coeff
    c2 = params.quadratic_coeff
    return np.array(
        [
            c4 * m[4] + c2 * m[2],
            4.0 * c4 * m[3] + 2.0 * c2 * m[1],
            6.0 * c4 * m[2] + c2 * m[0],
            4.0 * c4 * m[1],
            c4 * m[0],
        ],
        dtype=complex,
    )


def characteristics_propagate(
    psi0: WaveFunction,
    schedule: Schedule,
    params: PhysicalParams,
    t: float,
    n_quad: int = 256,
) -> WaveFunction:
    """Exact evolution to time t (up to moment quadrature for curved drives).

    The momentum shift psi~(p + F(t)) is a position-space multiplication by
    exp(-i F(t) x / hbar) before transforming; the accumulated kinetic phase
    multiplies pointwise in momentum space.
    """
    if psi0.representation != POSITION:
        raise ValueError("characteristics_propagate expects a position-representation state")
    grid = psi0.grid
    shift = float(schedule.antiderivative(t))
    vals = psi0.values * np.exp(-1j * shift * grid.x / grid.hbar)
    mom = _forward_values(grid, vals)
    theta = characteristics_phase_coefficients(schedule, params, t, n_quad)
    p = grid.p
    phase = ((((theta[4] * p + theta[3]) * p + theta[2]) * p + theta[1]) * p + theta[0])
    mom = mom * np.exp(-1j * phase / grid.hbar)
    return WaveFunction(_inverse_values(grid, mom), POSITION, grid)


def splitstep_propagate(
    psi0: WaveFunction,
    schedule: Schedule,
    params: PhysicalParams,
    grid: TimeGrid,
) -> list[WaveFunction]:
    """Strang splitting; returns the state at every grid instant.

    Both potential half-steps of a step use f at the step midpoint
    (symmetrized midpoint variant), which keeps global order 2 for
    time-dependent drives.  All multipliers have unit modulus, so the scheme
    is unconditionally norm-conserving; a phase-wrap warning is emitted when
    the kinetic phase advances more than PHASE_WRAP_THRESHOLD radians in one
    step at the grid's extreme momentum.
    """
    if psi0.representation != POSITION:
        raise ValueError("splitstep_propagate expects a position-representation state")
    sgrid = psi0.grid
    dt = grid.dt
    kinetic = params.kinetic_energy(sgrid.p)
    wrap = dt * float(np.max(np.abs(kinetic))) / sgrid.hbar
    if wrap > PHASE_WRAP_THRESHOLD:
        warnings.warn(
            f"kinetic phase advances {wrap:.3g} rad per step at the grid edge; "
            "results stay norm-conserving but edge modes are unresolved in time",
            PhaseWrapWarning,
            stacklevel=2,
        )
    kinetic_phase = np.exp(-1j * dt * kinetic / sgrid.hbar)
    trajectory = [psi0]
    vals = psi0.values
    for j in range(grid.n_steps):
        f_mid = float(schedule.evaluate((j + 0.5) * dt))
        half = np.exp(-0.5j * dt * f_mid * sgrid.x / sgrid.hbar)
        vals = half * vals
        vals = np.fft.ifft(kinetic_phase * np.fft.fft(vals))
        vals = half * vals
        trajectory.append(WaveFunction(vals, POSITION, sgrid))
    return trajectory


def schrodinger_residual(
    factors: PropagatorFactors,
    schedule: Schedule,
    params: PhysicalParams,
    spatial: SpatialGrid,
    test_states: Sequence[WaveFunction],
) -> float:
    """Finite-difference defect of i hbar dU/dt = H U over the factor grid.

    For every test state and interior instant:
    || i hbar (U(t+dt) - U(t-dt)) psi / (2 dt) - H(t) U(t) psi || / ||psi||,
    maximized.  Measures how well the factor trajectories satisfy the
    defining equation regardless of how they were produced; a single-instant
    trajectory has no interior and scores exactly 0.
    """
    if len(test_states) < 3:
        raise ValueError("need at least 3 linearly independent test states")
    times = factors.times
    m = times.shape[0]
    if m < 3:
        return 0.0
    dt = times[1] - times[0]
    hbar = spatial.hbar
    worst = 0.0
    for psi in test_states:
        if psi.representation != POSITION:
            raise ValueError("test states must be in position representation")
        norm0 = math.sqrt(float(np.sum(np.abs(psi.values) ** 2)) * spatial.dx)
        applied = [
            _apply_gamma_values(spatial, factors.gammas[j], psi.values)
            for j in range(3)
        ]
        for j in range(1, m - 1):
            h_el = hamiltonian(params, float(schedule.evaluate(times[j])))
            h_vals = apply_element(
                h_el, WaveFunction(applied[1], POSITION, spatial)
            ).values
            defect = 1j * hbar * (applied[2] - applied[0]) / (2.0 * dt) - h_vals
            value = math.sqrt(float(np.sum(np.abs(defect) ** 2)) * spatial.dx) / norm0
            worst = max(worst, value)
            if j + 2 < m:
                applied = [
                    applied[1],
                    applied[2],
                    _apply_gamma_values(spatial, factors.gammas[j + 2], psi.values),
                ]
    return worst


def state_distance(a: WaveFunction, b: WaveFunction) -> float:
    """L2 grid distance between two states in the same representation."""
    if a.representation != b.representation:
        raise ValueError("states must share a representation")
    weight = a.grid.dx if a.representation == POSITION else a.grid.dp
    return math.sqrt(float(np.sum(np.abs(a.values - b.values) ** 2)) * weight)


def fidelity(a: WaveFunction, b: WaveFunction) -> float:
    """|<a|b>| / (||a|| ||b||)."""
    return abs(inner_product(a, b)) / (norm(a) * norm(b))
