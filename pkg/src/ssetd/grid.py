"""Uniform periodic spatial grid, FFT transforms and spectral operator action.

Conventions pinned here and relied on everywhere else:

* position samples x_j = -L + j*dx with dx = 2L/n, n a power of two;
* momentum samples p_k = pi*hbar*k/L for signed k in [-n/2, n/2), stored in
  FFT layout, so dx*dp = 2*pi*hbar/n;
* position -> momentum uses the kernel exp(-i*p*x/hbar) with unitary
  normalization, hence Parseval holds without bookkeeping factors and
  multiplying psi(x) by exp(-i*a*x/hbar) shifts its momentum content by -a
  (pinned by a unit test against a translated Gaussian).

Everything assumes states with negligible boundary amplitude; x acts as a
sawtooth on the periodic domain, so expectation values involving x are only
meaningful for interior-supported states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import AlgebraElement

POSITION = "position"
MOMENTUM = "momentum"

PACKET_BOUNDARY_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class SpatialGrid:
    n: int
    half_width: float
    hbar: float = 1.0
    x: np.ndarray = field(init=False, repr=False)
    p: np.ndarray = field(init=False, repr=False)
    _fwd_phase: np.ndarray = field(init=False, repr=False)
    _inv_phase: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.n < 64 or (self.n & (self.n - 1)) != 0:
            raise ValueError(f"n must be a power of two >= 64, got {self.n}")
        if not (self.half_width > 0.0):
            raise ValueError("half_width must be positive")
        if not (self.hbar > 0.0):
            raise ValueError("hbar must be positive")
        dx = 2.0 * self.half_width / self.n
        x = -self.half_width + dx * np.arange(self.n)
        p = 2.0 * math.pi * self.hbar * np.fft.fftfreq(self.n, d=dx)
        unit = math.sqrt(2.0 * math.pi * self.hbar)
        # x[0]-offset phases make the FFT match the exp(-i*p*x/hbar) kernel.
        fwd = (dx / unit) * np.exp(-1j * p * x[0] / self.hbar)
        inv = (self.n * (math.pi * self.hbar / self.half_width) / unit) * np.exp(
            1j * p * x[0] / self.hbar
        )
        for name, arr in (("x", x), ("p", p), ("_fwd_phase", fwd), ("_inv_phase", inv)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / self.n

    @property
    def dp(self) -> float:
        return math.pi * self.hbar / self.half_width


def _forward_values(grid: SpatialGrid, values: np.ndarray) -> np.ndarray:
    """Position samples -> momentum samples (unitary, FFT layout)."""
    return grid._fwd_phase * np.fft.fft(values)


def _inverse_values(grid: SpatialGrid, values: np.ndarray) -> np.ndarray:
    """Momentum samples -> position samples."""
    return np.fft.ifft(values * grid._inv_phase)


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Complex samples on a grid, tagged with their representation.

    Values are copied on construction and frozen; every operation allocates a
    fresh wavefunction, so instances are safe to share.
    """

    values: np.ndarray
    representation: str
    grid: SpatialGrid

    def __post_init__(self) -> None:
        if self.representation not in (POSITION, MOMENTUM):
            raise ValueError(f"unknown representation {self.representation!r}")
        vals = np.array(self.values, dtype=complex)
        if vals.shape != (self.grid.n,):
            raise ValueError(
                f"values must have shape ({self.grid.n},), got {vals.shape}"
            )
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


def transform(psi: WaveFunction) -> WaveFunction:
    """Unitary DFT between position and momentum representation."""
    if psi.representation == POSITION:
        return WaveFunction(_forward_values(psi.grid, psi.values), MOMENTUM, psi.grid)
    return WaveFunction(_inverse_values(psi.grid, psi.values), POSITION, psi.grid)


def gaussian_packet(grid: SpatialGrid, x0: float, p0: float, sigma: float) -> WaveFunction:
    """Normalized packet exp(-(x-x0)^2/(4 sigma^2) + i p0 x/hbar).

    Rejects packets the grid cannot represent: sigma under-resolved by dx or
    envelope tails above PACKET_BOUNDARY_TOLERANCE at the domain edge.
    """
    if not (sigma > 0.0):
        raise ValueError("sigma must be positive")
    if grid.dx > sigma / 4.0:
        raise ValueError(
            f"sigma = {sigma} unresolved: need dx <= sigma/4, have dx = {grid.dx}"
        )
    envelope = np.exp(-((grid.x - x0) ** 2) / (4.0 * sigma**2))
    leak = max(envelope[0], envelope[-1])
    if leak > PACKET_BOUNDARY_TOLERANCE:
        raise ValueError(
            f"packet leaks at the boundary (envelope {leak:.3e} > "
            f"{PACKET_BOUNDARY_TOLERANCE:.0e}); enlarge the domain"
        )
    values = envelope * np.exp(1j * p0 * grid.x / grid.hbar)
    values = values / math.sqrt(np.sum(np.abs(values) ** 2) * grid.dx)
    return WaveFunction(values, POSITION, grid)


def _momentum_polynomial(e: AlgebraElement, p: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(p, dtype=complex)
    power = np.ones_like(p)
    for ck in e.cp:
        power = power * p
        if ck != 0:
            acc = acc + ck * power
    return acc


def apply_element(e: AlgebraElement, psi: WaveFunction) -> WaveFunction:
    """(c0 + cx*x + sum_k c_k p^k) psi, returned in the caller's representation.

    The x part multiplies pointwise in position space, the p part pointwise
    in momentum space; both are exact on the grid.
    """
    grid = psi.grid
    has_p = any(c != 0 for c in e.cp)
    if psi.representation == POSITION:
        out = (e.c0 + e.cx * grid.x) * psi.values
        if has_p:
            mom = _momentum_polynomial(e, grid.p) * _forward_values(grid, psi.values)
            out = out + _inverse_values(grid, mom)
    else:
        out = e.c0 * psi.values
        if has_p:
            out = out + _momentum_polynomial(e, grid.p) * psi.values
        if e.cx != 0:
            pos = _inverse_values(grid, psi.values)
            out = out + _forward_values(grid, e.cx * grid.x * pos)
    return WaveFunction(out, psi.representation, grid)


def inner_product(a: WaveFunction, b: WaveFunction) -> complex:
    """<a|b> with the grid measure; b is transformed to a's representation."""
    if a.grid is not b.grid and (
        a.grid.n != b.grid.n
        or a.grid.half_width != b.grid.half_width
        or a.grid.hbar != b.grid.hbar
    ):
        raise ValueError("inner product requires matching grids")
    if b.representation != a.representation:
        b = transform(b)
    weight = a.grid.dx if a.representation == POSITION else a.grid.dp
    return complex(np.vdot(a.values, b.values) * weight)


def norm(a: WaveFunction) -> float:
    return math.sqrt(abs(inner_product(a, a).real))


def expectation(e: AlgebraElement, psi: WaveFunction) -> complex:
    """<psi| e |psi> / <psi|psi>."""
    return inner_product(psi, apply_element(e, psi)) / inner_product(psi, psi)
