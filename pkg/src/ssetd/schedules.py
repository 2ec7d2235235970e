"""Time-dependent interaction strength f(t) and the fixed-step ODE integrator.

Presets carry closed-form antiderivatives so that F(t) = int_0^t f is exact;
tabulated schedules integrate their linear interpolant exactly.  The
integrator is classical fixed-step RK4: the coefficient systems are smooth
and low-dimensional, and fixed steps keep every trajectory bit-for-bit
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .derive import ConstraintTable

CONSTANT = "constant"
LINEAR = "linear"
SINUSOID = "sinusoid"
TABULATED = "tabulated"


@dataclass(frozen=True, eq=False)
class Schedule:
    kind: str
    f0: float = 0.0
    f1: float = 0.0
    omega: float = 0.0
    phi: float = 0.0
    times: np.ndarray | None = None
    values: np.ndarray | None = None
    _knot_integrals: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.kind not in (CONSTANT, LINEAR, SINUSOID, TABULATED):
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if self.kind == SINUSOID and self.omega == 0.0:
            raise ValueError("sinusoid schedule requires omega != 0")
        if self.kind == TABULATED:
            t = np.asarray(self.times, dtype=float)
            v = np.asarray(self.values, dtype=float)
            if t.ndim != 1 or t.size < 2:
                raise ValueError("tabulated schedule needs at least two samples")
            if v.shape != t.shape:
                raise ValueError("tabulated times and values must match in length")
            if not np.all(np.diff(t) > 0):
                raise ValueError("tabulated times must be strictly increasing")
            if t[0] > 0.0:
                raise ValueError("tabulated samples must cover t = 0")
            object.__setattr__(self, "times", t)
            object.__setattr__(self, "values", v)
            # Exact integral of the interpolant, accumulated at the knots.
            seg = 0.5 * (v[1:] + v[:-1]) * np.diff(t)
            knots = np.concatenate(([0.0], np.cumsum(seg)))
            object.__setattr__(self, "_knot_integrals", knots)

    @classmethod
    def constant(cls, f0: float) -> "Schedule":
        return cls(CONSTANT, f0=f0)

    @classmethod
    def linear(cls, f0: float, f1: float) -> "Schedule":
        """f(t) = f0 + f1*t."""
        return cls(LINEAR, f0=f0, f1=f1)

    @classmethod
    def sinusoid(cls, f0: float, omega: float, phi: float = 0.0) -> "Schedule":
        """f(t) = f0*sin(omega*t + phi)."""
        return cls(SINUSOID, f0=f0, omega=omega, phi=phi)

    @classmethod
    def tabulated(cls, times, values) -> "Schedule":
        return cls(TABULATED, times=times, values=values)

    def _check_range(self, t) -> None:
        t = np.asarray(t, dtype=float)
        lo, hi = self.times[0], self.times[-1]
        if np.any(t < lo) or np.any(t > hi):
            raise ValueError(
                f"tabulated schedule queried outside [{lo}, {hi}]"
            )

    def evaluate(self, t):
        """f(t); accepts scalars or arrays."""
        ta = np.asarray(t, dtype=float)
        if self.kind == CONSTANT:
            out = self.f0 + 0.0 * ta
        elif self.kind == LINEAR:
            out = self.f0 + self.f1 * ta
        elif self.kind == SINUSOID:
            out = self.f0 * np.sin(self.omega * ta + self.phi)
        else:
            self._check_range(ta)
            out = np.interp(ta, self.times, self.values)
        return out if np.ndim(t) else float(out)

    def antiderivative(self, t):
        """F(t) = int_0^t f(s) ds, exact for every kind; F(0) = 0."""
        ta = np.asarray(t, dtype=float)
        if self.kind == CONSTANT:
            out = self.f0 * ta
        elif self.kind == LINEAR:
            out = self.f0 * ta + 0.5 * self.f1 * ta * ta
        elif self.kind == SINUSOID:
            out = (self.f0 / self.omega) * (np.cos(self.phi) - np.cos(self.omega * ta + self.phi))
        else:
            self._check_range(ta)
            raw = self._tabulated_integral(np.atleast_1d(ta))
            zero = self._tabulated_integral(np.zeros(1))
            out = (raw - zero).reshape(ta.shape)
        return out if np.ndim(t) else float(out)

    def _tabulated_integral(self, t: np.ndarray) -> np.ndarray:
        """Integral of the interpolant from times[0] to each t."""
        idx = np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, self.times.size - 2)
        t0 = self.times[idx]
        v0 = self.values[idx]
        vt = np.interp(t, self.times, self.values)
        return self._knot_integrals[idx] + 0.5 * (v0 + vt) * (t - t0)


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Uniform sample instants t_j = j*dt on [0, t_end]."""

    t_end: float
    n_steps: int

    def __post_init__(self) -> None:
        if self.n_steps < 1:
            raise ValueError(f"n_steps must be >= 1, got {self.n_steps}")
        if not (self.t_end > 0.0):
            raise ValueError(f"t_end must be positive, got {self.t_end}")

    @property
    def dt(self) -> float:
        return self.t_end / self.n_steps

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_end, self.n_steps + 1)

    def instant_index(self, t: float, tol: float = 1e-9) -> int:
        j = int(round(t / self.dt))
        if j < 0 or j > self.n_steps or abs(j * self.dt - t) > tol * max(1.0, self.t_end):
            raise ValueError(f"t = {t} is not a sample instant of this grid")
        return j


def integrate_linear_system(
    rhs: ConstraintTable,
    initial,
    schedule: Schedule,
    grid: TimeGrid,
) -> np.ndarray:
    """Classical RK4 over the grid; returns the state at every instant.

    The right-hand side is the constraint table evaluated at the current
    state, with the symbol "f" bound to the schedule.  Deterministic: same
    inputs give bit-identical trajectories.
    """
    state0 = np.asarray(initial, dtype=complex)
    dim = len(rhs.state_symbols)
    if state0.shape != (dim,):
        raise ValueError(f"initial state must have length {dim}, got {state0.shape}")
    compiled = rhs.compile()

    def deriv(t: float, y: np.ndarray) -> np.ndarray:
        f_val = float(schedule.evaluate(t))
        out = np.zeros(dim, dtype=complex)
        for i, terms in enumerate(compiled):
            total = 0j
            for coeff, idxs, f_power in terms:
                value = coeff
                for k in idxs:
                    value = value * y[k]
                if f_power:
                    value = value * f_val**f_power
                total += value
            out[i] = total
        return out

    dt = grid.dt
    n = grid.n_steps
    ys = np.empty((n + 1, dim), dtype=complex)
    ys[0] = state0
    t = 0.0
    for j in range(n):
        y = ys[j]
        k1 = deriv(t, y)
        k2 = deriv(t + 0.5 * dt, y + (0.5 * dt) * k1)
        k3 = deriv(t + 0.5 * dt, y + (0.5 * dt) * k2)
        k4 = deriv(t + dt, y + dt * k3)
        ys[j + 1] = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = (j + 1) * dt
    return ys
