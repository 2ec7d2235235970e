"""Power-series solutions of the frozen-time eigenvalue ODE, and the
expectation-value phase attaching an eigenfunction to a Schroedinger solution.

The eigenvalue problem at a frozen instant,

    hbar^4 A phi'''' - i hbar^3 B phi''' - C hbar^2 phi'' - i hbar D phi'
        + E x phi + F phi = lambda phi,

admits entire power-series solutions phi = sum a_n x^n whose coefficients obey
a six-term recurrence; the four seeds a_0..a_3 parametrize the full solution
space.  Series are built per canonical seed and combined linearly, which makes
linearity in the seeds structural rather than approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .algebra import AlgebraElement, PhysicalParams
from .grid import WaveFunction, apply_element, inner_product
from .invariant import FrozenCoefficients
from .schedules import TimeGrid

TAIL_TOLERANCE = 1e-10
MAX_ORDER = 4096


class SeriesOverflowError(RuntimeError):
    """Raised when a recurrence coefficient stops being finite."""

    def __init__(self, index: int):
        super().__init__(f"non-finite series coefficient at index {index}")
        self.index = index


@dataclass(frozen=True, eq=False)
class SeriesEigenfunction:
    lam: complex
    seeds: tuple[complex, complex, complex, complex]
    coeffs: np.ndarray
    order: int
    half_width: float
    frozen_time: float | None
    tail: float
    weight_total: float
    converged: bool


def _recurrence_basis(
    frozen: FrozenCoefficients, params: PhysicalParams, lam: complex, order: int
) -> np.ndarray:
    """The four canonical-seed coefficient arrays, shape (4, order+1).

    Row i starts from the unit seed e_i; every later coefficient follows the
    recurrence

        hbar^4 A (m+4)(m+3)(m+2)(m+1) a_{m+4}
            = i hbar^3 B (m+3)(m+2)(m+1) a_{m+3} + C hbar^2 (m+2)(m+1) a_{m+2}
              + i hbar D (m+1) a_{m+1} + (lambda - F) a_m - E a_{m-1},

    with a_{-1} = 0.
    """
    hbar = params.hbar
    A, B, C, D, E, F = frozen.A, frozen.B, frozen.C, frozen.D, frozen.E, frozen.F
    c3 = 1j * hbar**3 * B
    c2 = hbar**2 * C
    c1 = 1j * hbar * D
    c0 = lam - F
    lead = hbar**4 * A
    basis = np.zeros((4, order + 1), dtype=complex)
    # Overflow is detected explicitly and reported with its index.
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(4):
            basis[i, i] = 1.0
            a = basis[i]
            for m in range(order - 3):
                num = (
                    c3 * (m + 3) * (m + 2) * (m + 1) * a[m + 3]
                    + c2 * (m + 2) * (m + 1) * a[m + 2]
                    + c1 * (m + 1) * a[m + 1]
                    + c0 * a[m]
                )
                if m >= 1:
                    num = num - E * a[m - 1]
                value = num / (lead * (m + 4) * (m + 3) * (m + 2) * (m + 1))
                if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                    raise SeriesOverflowError(m + 4)
                a[m + 4] = value
    return basis


def _log_weights(coeffs: np.ndarray, half_width: float) -> np.ndarray:
    """log(|a_n| * L^n) with -inf for zero coefficients."""
    mags = np.abs(coeffs)
    with np.errstate(divide="ignore"):
        logs = np.log(mags)
    return logs + np.arange(coeffs.shape[0]) * math.log(half_width)


def _stable_expsum(logs: np.ndarray) -> float:
    finite = logs[np.isfinite(logs)]
    if finite.size == 0:
        return 0.0
    peak = float(np.max(finite))
    if peak > 700.0:
        return math.inf
    return float(np.exp(peak) * np.sum(np.exp(finite - peak)))


def build_series(
    coeffs_at_t: FrozenCoefficients,
    params: PhysicalParams,
    lam: complex,
    seeds: Sequence[complex],
    order: int,
    half_width: float,
    frozen_time: float | None = None,
) -> SeriesEigenfunction:
    """Truncated series for the given eigenvalue, seeds and domain half-width.

    The recorded tail sum(|a_n| L^n, n = order-3..order) certifies evaluation
    inside |x| <= half_width; the instance is marked converged when the tail
    falls below TAIL_TOLERANCE relative to the full weight sum.
    """
    if coeffs_at_t.A == 0:
        raise ValueError("leading coefficient A must be nonzero (the ODE degenerates)")
    if order < 8:
        raise ValueError(f"order must be >= 8, got {order}")
    if not (half_width > 0.0):
        raise ValueError("half_width must be positive")
    seeds = tuple(complex(s) for s in seeds)
    if len(seeds) != 4:
        raise ValueError("exactly four seeds a_0..a_3 are required")
    basis = _recurrence_basis(coeffs_at_t, params, complex(lam), order)
    coeffs = np.zeros(order + 1, dtype=complex)
    for i in range(4):
        coeffs = coeffs + seeds[i] * basis[i]
    logs = _log_weights(coeffs, half_width)
    weight_total = _stable_expsum(logs)
    tail = _stable_expsum(logs[-4:])
    converged = math.isfinite(tail) and tail <= TAIL_TOLERANCE * max(1.0, weight_total)
    return SeriesEigenfunction(
        lam=complex(lam),
        seeds=seeds,
        coeffs=coeffs,
        order=order,
        half_width=half_width,
        frozen_time=frozen_time,
        tail=tail,
        weight_total=weight_total,
        converged=converged,
    )


def build_series_auto(
    coeffs_at_t: FrozenCoefficients,
    params: PhysicalParams,
    lam: complex,
    seeds: Sequence[complex],
    half_width: float,
    frozen_time: float | None = None,
    start_order: int = 32,
) -> SeriesEigenfunction:
    """Double the truncation order from start_order until the tail converges.

    Stops at MAX_ORDER; the returned instance is then flagged unconverged.
    """
    order = max(8, start_order)
    while True:
        phi = build_series(
            coeffs_at_t, params, lam, seeds, order, half_width, frozen_time
        )
        if phi.converged or order >= MAX_ORDER:
            return phi
        order = min(2 * order, MAX_ORDER)


def evaluate(phi: SeriesEigenfunction, x) -> complex | np.ndarray:
    """Horner evaluation of the truncated series; only certified for |x| <= L."""
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) > phi.half_width):
        raise ValueError(
            f"evaluation outside the certified domain |x| <= {phi.half_width}"
        )
    out = npoly.polyval(xa, phi.coeffs)
    return out if np.ndim(x) else complex(out)


def recurrence_residual(phi: SeriesEigenfunction, coeffs_at_t: FrozenCoefficients,
                        params: PhysicalParams) -> float:
    """Largest relative defect of the recurrence over all filled indices.

    Pure arithmetic identity: zero up to rounding for any built series.
    """
    hbar = params.hbar
    a = phi.coeffs
    A, B, C, D, E, F = (coeffs_at_t.A, coeffs_at_t.B, coeffs_at_t.C,
                        coeffs_at_t.D, coeffs_at_t.E, coeffs_at_t.F)
    worst = 0.0
    for m in range(phi.order - 3):
        lhs = hbar**4 * A * (m + 4) * (m + 3) * (m + 2) * (m + 1) * a[m + 4]
        rhs = (
            1j * hbar**3 * B * (m + 3) * (m + 2) * (m + 1) * a[m + 3]
            + hbar**2 * C * (m + 2) * (m + 1) * a[m + 2]
            + 1j * hbar * D * (m + 1) * a[m + 1]
            + (phi.lam - F) * a[m]
        )
        if m >= 1:
            rhs = rhs - E * a[m - 1]
        scale = max(abs(lhs), abs(rhs), 1.0)
        worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def eigen_residual(
    phi: SeriesEigenfunction,
    coeffs_at_t: FrozenCoefficients,
    params: PhysicalParams,
    x_samples,
) -> float:
    """max |ODE(phi) - lambda*phi| over the samples, derivatives taken termwise."""
    xs = np.asarray(x_samples, dtype=float)
    if np.any(np.abs(xs) > phi.half_width):
        raise ValueError("samples must lie inside the certified domain")
    hbar = params.hbar
    c = phi.coeffs
    derivs = [c]
    for _ in range(4):
        prev = derivs[-1]
        derivs.append(prev[1:] * np.arange(1, prev.shape[0]))
    vals = [npoly.polyval(xs, d) for d in derivs]
    fr = coeffs_at_t
    resid = (
        hbar**4 * fr.A * vals[4]
        - 1j * hbar**3 * fr.B * vals[3]
        - hbar**2 * fr.C * vals[2]
        - 1j * hbar * fr.D * vals[1]
        + (fr.E * xs + fr.F - phi.lam) * vals[0]
    )
    return float(np.max(np.abs(resid)))


def lr_phase(
    phi_trajectory: Sequence[WaveFunction],
    hamiltonian_at: Callable[[float], AlgebraElement],
    grid: TimeGrid,
) -> np.ndarray:
    """Phase alpha(t) with hbar * alpha' = <phi| i hbar d/dt - H |phi> / <phi|phi>.

    d(phi)/dt is a centered difference on the trajectory (one-sided at the
    ends); the integrand accumulates by composite trapezoid with alpha(0) = 0.
    exp(i*alpha(t)) * phi(t) then solves the Schroedinger equation whenever
    phi is an invariant eigenfunction trajectory.
    """
    m = grid.n_steps + 1
    if len(phi_trajectory) != m:
        raise ValueError("trajectory length must match the time grid")
    if m < 3:
        raise ValueError("need at least 3 instants for the phase integrand")
    rep = phi_trajectory[0].representation
    sgrid = phi_trajectory[0].grid
    if any(p.representation != rep or p.grid is not sgrid for p in phi_trajectory):
        raise ValueError("trajectory states must share one grid and representation")
    dt = grid.dt
    times = grid.times()
    hbar = sgrid.hbar

    def dphi_values(j: int) -> np.ndarray:
        if j == 0:
            return (
                -1.5 * phi_trajectory[0].values
                + 2.0 * phi_trajectory[1].values
                - 0.5 * phi_trajectory[2].values
            ) / dt
        if j == m - 1:
            return (
                1.5 * phi_trajectory[-1].values
                - 2.0 * phi_trajectory[-2].values
                + 0.5 * phi_trajectory[-3].values
            ) / dt
        return (phi_trajectory[j + 1].values - phi_trajectory[j - 1].values) / (2.0 * dt)

    rate = np.empty(m)
    for j in range(m):
        phi_j = phi_trajectory[j]
        norm2 = inner_product(phi_j, phi_j).real
        if not norm2 > 0.0:
            raise ValueError(f"vanishing state norm at instant {j}")
        h_phi = apply_element(hamiltonian_at(times[j]), phi_j)
        integrand = WaveFunction(
            1j * hbar * dphi_values(j) - h_phi.values, rep, sgrid
        )
        rate[j] = (inner_product(phi_j, integrand) / norm2).real / hbar
    alpha = np.zeros(m)
    np.cumsum(0.5 * dt * (rate[1:] + rate[:-1]), out=alpha[1:])
    return alpha
