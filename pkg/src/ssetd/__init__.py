"""Simulation and cross-verification toolkit for the time-dependent
semi-relativistic Hamiltonian H(t) = p^4/(8 eta^3) + p^2/(2 mu) + f(t) x.

The package derives the coefficient ODE systems for the dynamical invariant
and for the ordered-exponential evolution operator symbolically, integrates
them, and validates everything against two independent propagation oracles
(method of characteristics and Strang split-step) on a periodic spectral
grid.
"""

from .algebra import AlgebraElement, PhysicalParams, commutator, conjugate_by_p_exponential
from .config import RunConfig, parse_config
from .derive import ConstraintTable, derive_invariant_constraints, derive_propagator_constraints
from .grid import SpatialGrid, WaveFunction, gaussian_packet, transform
from .invariant import InvariantCoefficients, solve_coefficients
from .propagator import PropagatorFactors, solve_gammas
from .schedules import Schedule, TimeGrid
from .series import SeriesEigenfunction, build_series

__all__ = [
    "AlgebraElement",
    "PhysicalParams",
    "commutator",
    "conjugate_by_p_exponential",
    "RunConfig",
    "parse_config",
    "ConstraintTable",
    "derive_invariant_constraints",
    "derive_propagator_constraints",
    "SpatialGrid",
    "WaveFunction",
    "gaussian_packet",
    "transform",
    "InvariantCoefficients",
    "solve_coefficients",
    "PropagatorFactors",
    "solve_gammas",
    "Schedule",
    "TimeGrid",
    "SeriesEigenfunction",
    "build_series",
]

__version__ = "0.1.0"
