"""Run configuration: strict parsing, validation and defaults.

Configs are TOML (JSON is accepted as an alternative container; a leading
"{" selects it).  Validation is fail-fast and strict: unknown keys are
errors, every message carries the offending key path, and no output is
produced unless the whole config validates.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field, fields

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .algebra import PhysicalParams
from .grid import SpatialGrid
from .schedules import Schedule, TimeGrid

PROPAGATE_METHODS = ("weinorman", "characteristics", "splitstep", "paper-literal")


class ConfigError(ValueError):
    """Invalid configuration; the message names the key path."""


@dataclass(frozen=True)
class Tolerances:
    oracle_agreement_exact: float = 1e-8
    oracle_agreement_quadrature: float = 1e-6
    invariant_residual: float = 1e-6
    published_invariant_residual_min: float = 1e-2
    expectation_drift: float = 1e-6
    gamma1: float = 1e-12
    gamma5: float = 1e-12
    gamma3_closed_form: float = 1e-10
    norm_drift: float = 1e-10
    re_gamma: float = 1e-12
    published_residual_plateau_min: float = 1e-3
    splitstep_order_low: float = 1.8
    splitstep_order_high: float = 2.2
    residual_order_low: float = 1.7
    residual_order_high: float = 2.3
    homomorphism_rel: float = 1e-8
    series_recurrence: float = 1e-13
    series_exp_value: float = 1e-10
    series_exp_residual: float = 1e-9
    lr_stationary: float = 1e-10
    lr_order_min: float = 1.9


@dataclass(frozen=True)
class EigenSpec:
    lam: complex = 1.0 + 0j
    seeds: tuple[complex, complex, complex, complex] = (1.0, 0.0, 0.0, 0.0)
    order: int = 0  # 0 selects the automatic order-doubling policy
    half_width: float = 8.0
    frozen_step: int = 0
    samples: int = 201


@dataclass(frozen=True)
class PropagateSpec:
    method: str = "weinorman"
    checkpoints: int = 8
    n_quad: int = 256
    dump_psi: bool = False


@dataclass(frozen=True)
class InvariantConstants:
    A: complex = 1.0 + 0j
    E: complex = 1.0 + 0j
    B0: complex = 0j
    C0: complex = 0j
    D0: complex = 0j
    F0: complex = 0j


@dataclass(frozen=True)
class RunConfig:
    params: PhysicalParams
    schedule: Schedule
    t_end: float
    n_steps: int
    space_n: int
    space_half_width: float
    packet_x0: float
    packet_p0: float
    packet_sigma: float
    invariant: InvariantConstants
    eigen: EigenSpec
    propagate: PropagateSpec
    tolerances: Tolerances
    verify_seed: int = 20240801
    sweep_base_steps: int = 100
    sweep_refinements: int = 3
    output_dir: str = "out"
    raw: dict = field(default_factory=dict, repr=False)

    def resolved(self) -> dict:
        """The fully-resolved configuration as plain JSON-ready data."""

        def cplx(z: complex) -> list[float]:
            return [z.real, z.imag]

        schedule: dict = {"kind": self.schedule.kind}
        if self.schedule.kind == "constant":
            schedule["f0"] = self.schedule.f0
        elif self.schedule.kind == "linear":
            schedule.update(f0=self.schedule.f0, f1=self.schedule.f1)
        elif self.schedule.kind == "sinusoid":
            schedule.update(
                f0=self.schedule.f0, omega=self.schedule.omega, phi=self.schedule.phi
            )
        else:
            schedule.update(
                times=list(map(float, self.schedule.times)),
                values=list(map(float, self.schedule.values)),
            )
        return {
            "physical": {
                "m1": self.params.m1,
                "m2": self.params.m2,
                "hbar": self.params.hbar,
                "mu": self.params.mu,
                "eta": self.params.eta,
            },
            "f": schedule,
            "time": {"t_end": self.t_end, "n_steps": self.n_steps},
            "space": {"n": self.space_n, "half_width": self.space_half_width},
            "packet": {
                "x0": self.packet_x0,
                "p0": self.packet_p0,
                "sigma": self.packet_sigma,
            },
            "invariant": {
                name: cplx(getattr(self.invariant, name))
                for name in ("A", "E", "B0", "C0", "D0", "F0")
            },
            "eigen": {
                "lambda": cplx(self.eigen.lam),
                "seeds": [cplx(s) for s in self.eigen.seeds],
                "N": self.eigen.order,
                "L": self.eigen.half_width,
                "frozen_step": self.eigen.frozen_step,
                "samples": self.eigen.samples,
            },
            "propagate": {
                "method": self.propagate.method,
                "checkpoints": self.propagate.checkpoints,
                "n_quad": self.propagate.n_quad,
                "dump_psi": self.propagate.dump_psi,
            },
            "verify": {"seed": self.verify_seed},
            "sweep": {
                "base_steps": self.sweep_base_steps,
                "refinements": self.sweep_refinements,
            },
            "tolerances": {
                f.name: getattr(self.tolerances, f.name) for f in fields(Tolerances)
            },
            "output": {"dir": self.output_dir},
        }

    def time_grid(self) -> TimeGrid:
        return TimeGrid(self.t_end, self.n_steps)

    def spatial_grid(self) -> SpatialGrid:
        return SpatialGrid(self.space_n, self.space_half_width, self.params.hbar)

    def packet(self):
        from .grid import gaussian_packet

        return gaussian_packet(
            self.spatial_grid(), self.packet_x0, self.packet_p0, self.packet_sigma
        )


_SECTIONS = {
    "physical": {"m1", "m2", "hbar"},
    "f": {"kind", "f0", "f1", "omega", "phi", "times", "values"},
    "time": {"t_end", "n_steps"},
    "space": {"n", "half_width"},
    "packet": {"x0", "p0", "sigma"},
    "invariant": {"A", "E", "B0", "C0", "D0", "F0"},
    "eigen": {"lambda", "seeds", "N", "L", "frozen_step", "samples"},
    "propagate": {"method", "checkpoints", "n_quad", "dump_psi"},
    "verify": {"seed"},
    "sweep": {"base_steps", "refinements"},
    "tolerances": {f.name for f in fields(Tolerances)},
    "output": {"dir"},
}


def _require_mapping(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{path}: expected a table/object")
    return value


def _check_keys(section: dict, allowed: set[str], path: str) -> None:
    for key in section:
        if key not in allowed:
            raise ConfigError(f"unknown key {path}.{key}")


def _get_float(section: dict, key: str, default: float, path: str) -> float:
    value = section.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number")
    return float(value)


def _get_int(section: dict, key: str, default: int, path: str) -> int:
    value = section.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}.{key}: expected an integer")
    return int(value)


def _get_bool(section: dict, key: str, default: bool, path: str) -> bool:
    value = section.get(key, default)
    if not isinstance(value, bool):
        raise ConfigError(f"{path}.{key}: expected a boolean")
    return value


def _get_complex(section: dict, key: str, default: complex, path: str) -> complex:
    value = section.get(key, default)
    return _as_complex(value, f"{path}.{key}")


def _as_complex(value, path: str) -> complex:
    if isinstance(value, bool):
        raise ConfigError(f"{path}: expected a number or [re, im] pair")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, complex):
        return value
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(value[0], value[1])
    raise ConfigError(f"{path}: expected a number or [re, im] pair")


def _build_schedule(section: dict, path: str) -> Schedule:
    kind = section.get("kind", "constant")
    if kind == "constant":
        _check_keys(section, {"kind", "f0"}, path)
        return Schedule.constant(_get_float(section, "f0", 0.2, path))
    if kind == "linear":
        _check_keys(section, {"kind", "f0", "f1"}, path)
        return Schedule.linear(
            _get_float(section, "f0", 0.0, path), _get_float(section, "f1", 0.0, path)
        )
    if kind == "sinusoid":
        _check_keys(section, {"kind", "f0", "omega", "phi"}, path)
        if "omega" not in section:
            raise ConfigError(f"{path}.omega: required for sinusoid schedules")
        return Schedule.sinusoid(
            _get_float(section, "f0", 0.0, path),
            _get_float(section, "omega", 0.0, path),
            _get_float(section, "phi", 0.0, path),
        )
    if kind == "tabulated":
        _check_keys(section, {"kind", "times", "values"}, path)
        for key in ("times", "values"):
            if key not in section or not isinstance(section[key], list):
                raise ConfigError(f"{path}.{key}: required array for tabulated schedules")
        try:
            return Schedule.tabulated(
                np.asarray(section["times"], dtype=float),
                np.asarray(section["values"], dtype=float),
            )
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    raise ConfigError(f"{path}.kind: unknown schedule kind {kind!r}")


def config_from_mapping(data: dict) -> RunConfig:
    data = _require_mapping(data, "config")
    _check_keys(data, set(_SECTIONS), "config")
    sections = {
        name: _require_mapping(data.get(name, {}), name) for name in _SECTIONS
    }
    for name, allowed in _SECTIONS.items():
        if name != "f":  # schedule keys depend on the kind
            _check_keys(sections[name], allowed, name)

    phys = sections["physical"]
    phys_values = {}
    for key in ("m1", "m2", "hbar"):
        value = _get_float(phys, key, 1.0, "physical")
        if not value > 0.0:
            raise ConfigError(f"physical.{key}: must be positive, got {value}")
        phys_values[key] = value
    params = PhysicalParams(**phys_values)

    schedule = _build_schedule(sections["f"], "f")

    time_sec = sections["time"]
    t_end = _get_float(time_sec, "t_end", 2.0, "time")
    n_steps = _get_int(time_sec, "n_steps", 400, "time")
    if n_steps < 0:
        raise ConfigError("time.n_steps: must be >= 0")
    if n_steps > 0 and not t_end > 0.0:
        raise ConfigError("time.t_end: must be positive when n_steps > 0")

    space = sections["space"]
    space_n = _get_int(space, "n", 16384, "space")
    space_half_width = _get_float(space, "half_width", 256.0, "space")
    try:
        SpatialGrid(space_n, space_half_width, params.hbar)
    except ValueError as exc:
        raise ConfigError(f"space: {exc}") from exc

    packet = sections["packet"]
    packet_x0 = _get_float(packet, "x0", -4.0, "packet")
    packet_p0 = _get_float(packet, "p0", 1.0, "packet")
    packet_sigma = _get_float(packet, "sigma", 1.0, "packet")
    if not packet_sigma > 0.0:
        raise ConfigError("packet.sigma: must be positive")

    inv = sections["invariant"]
    invariant = InvariantConstants(
        A=_get_complex(inv, "A", 1.0 + 0j, "invariant"),
        E=_get_complex(inv, "E", 1.0 + 0j, "invariant"),
        B0=_get_complex(inv, "B0", 0j, "invariant"),
        C0=_get_complex(inv, "C0", 0j, "invariant"),
        D0=_get_complex(inv, "D0", 0j, "invariant"),
        F0=_get_complex(inv, "F0", 0j, "invariant"),
    )
    if invariant.A == 0:
        raise ConfigError("invariant.A: must be nonzero (series solver degenerates)")

    eig = sections["eigen"]
    seeds_raw = eig.get("seeds", [1.0, 0.0, 0.0, 0.0])
    if not isinstance(seeds_raw, list) or len(seeds_raw) != 4:
        raise ConfigError("eigen.seeds: expected a list of 4 entries")
    seeds = tuple(_as_complex(s, f"eigen.seeds[{i}]") for i, s in enumerate(seeds_raw))
    order = _get_int(eig, "N", 0, "eigen")
    if order != 0 and order < 8:
        raise ConfigError("eigen.N: must be 0 (automatic) or >= 8")
    eigen_half_width = _get_float(eig, "L", 8.0, "eigen")
    if not eigen_half_width > 0.0:
        raise ConfigError("eigen.L: must be positive")
    frozen_step = _get_int(eig, "frozen_step", 0, "eigen")
    if frozen_step < 0 or frozen_step > n_steps:
        raise ConfigError("eigen.frozen_step: outside the time grid")
    samples = _get_int(eig, "samples", 201, "eigen")
    if samples < 2:
        raise ConfigError("eigen.samples: must be >= 2")
    eigen = EigenSpec(
        lam=_get_complex(eig, "lambda", 1.0 + 0j, "eigen"),
        seeds=seeds,
        order=order,
        half_width=eigen_half_width,
        frozen_step=frozen_step,
        samples=samples,
    )

    prop = sections["propagate"]
    method = prop.get("method", "weinorman")
    if method not in PROPAGATE_METHODS:
        raise ConfigError(
            f"propagate.method: expected one of {PROPAGATE_METHODS}, got {method!r}"
        )
    checkpoints = _get_int(prop, "checkpoints", 8, "propagate")
    if checkpoints < 1:
        raise ConfigError("propagate.checkpoints: must be >= 1")
    n_quad = _get_int(prop, "n_quad", 256, "propagate")
    if n_quad < 16:
        raise ConfigError("propagate.n_quad: must be >= 16")
    propagate = PropagateSpec(
        method=method,
        checkpoints=checkpoints,
        n_quad=n_quad,
        dump_psi=_get_bool(prop, "dump_psi", False, "propagate"),
    )

    tol_sec = sections["tolerances"]
    tol_values = {
        f.name: _get_float(tol_sec, f.name, f.default, "tolerances")
        for f in fields(Tolerances)
    }
    tolerances = Tolerances(**tol_values)

    verify_seed = _get_int(sections["verify"], "seed", 20240801, "verify")
    sweep_base = _get_int(sections["sweep"], "base_steps", 100, "sweep")
    sweep_ref = _get_int(sections["sweep"], "refinements", 3, "sweep")
    if sweep_base < 4:
        raise ConfigError("sweep.base_steps: must be >= 4")
    if sweep_ref < 2:
        raise ConfigError("sweep.refinements: must be >= 2")

    out_dir = sections["output"].get("dir", "out")
    if not isinstance(out_dir, str):
        raise ConfigError("output.dir: expected a string")

    return RunConfig(
        params=params,
        schedule=schedule,
        t_end=t_end,
        n_steps=n_steps,
        space_n=space_n,
        space_half_width=space_half_width,
        packet_x0=packet_x0,
        packet_p0=packet_p0,
        packet_sigma=packet_sigma,
        invariant=invariant,
        eigen=eigen,
        propagate=propagate,
        tolerances=tolerances,
        verify_seed=verify_seed,
        sweep_base_steps=sweep_base,
        sweep_refinements=sweep_ref,
        output_dir=out_dir,
        raw=data,
    )


def parse_config(text: str) -> RunConfig:
    """Parse TOML (or JSON, selected by a leading '{') into a RunConfig."""
    stripped = text.lstrip()
    try:
        if stripped.startswith("{"):
            data = json.loads(text)
        else:
            data = tomllib.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"config is not well-formed: {exc}") from exc
    return config_from_mapping(data)


def default_config() -> RunConfig:
    return config_from_mapping({})
