"""Command-line entry point: sse-td {derive|invariant|eigen|propagate|verify|sweep}.

Exit codes: 0 success, 1 tolerance violation (verify/sweep), 2 configuration
error, 3 internal numerical failure (overflow or unconverged series).
Outputs are deterministic: identical configs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import struct
import sys
from pathlib import Path

import numpy as np

from . import published as pub
from .algebra import p_power, x_op
from .config import ConfigError, RunConfig, default_config, parse_config
from .derive import derive_invariant_constraints, derive_propagator_constraints
from .grid import WaveFunction, expectation, norm
from .invariant import FrozenCoefficients, residual_scan, solve_coefficients
from .propagator import (
    apply,
    characteristics_propagate,
    fidelity,
    solve_gammas,
    splitstep_propagate,
)
from .report import run_sweep, run_verify, table_diff
from .series import SeriesOverflowError, build_series, build_series_auto, eigen_residual, evaluate

PSI_MAGIC = b"SSEQPSI1"
REPRESENTATION_FLAGS = {"position": 0, "momentum": 1}

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _fmt(value: float) -> str:
    return repr(float(value))


def write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def dump_psi(path: Path, psi: WaveFunction) -> None:
    """Binary state dump: magic, uint32 N, uint32 representation flag,
    then interleaved little-endian float64 re/im pairs."""
    flag = REPRESENTATION_FLAGS[psi.representation]
    header = PSI_MAGIC + struct.pack("<II", psi.grid.n, flag)
    data = np.empty(2 * psi.grid.n, dtype="<f8")
    data[0::2] = psi.values.real
    data[1::2] = psi.values.imag
    path.write_bytes(header + data.tobytes())


def read_psi(path: Path) -> tuple[np.ndarray, int]:
    blob = path.read_bytes()
    if blob[:8] != PSI_MAGIC:
        raise ValueError("not a state dump (bad magic)")
    n, flag = struct.unpack("<II", blob[8:16])
    data = np.frombuffer(blob[16:], dtype="<f8")
    if data.shape[0] != 2 * n:
        raise ValueError("truncated state dump")
    return data[0::2] + 1j * data[1::2], flag


def _load_config(path: str | None) -> RunConfig:
    if path is None:
        return default_config()
    return parse_config(Path(path).read_text(encoding="utf-8"))


def _out_dir(args, config: RunConfig) -> Path:
    out = Path(args.out) if args.out else Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_derive(args, config: RunConfig) -> int:
    params = config.params
    derived_inv = derive_invariant_constraints(params)
    derived_prop = derive_propagator_constraints(params)
    published_inv = pub.published_invariant_table(params)
    published_prop = pub.published_propagator_table(params)
    payload = {
        "invariant": {
            "derived": derived_inv.to_json_dict(),
            "published": published_inv.to_json_dict(),
            "diff": table_diff(derived_inv, published_inv),
        },
        "propagator": {
            "derived": derived_prop.to_json_dict(),
            "published": published_prop.to_json_dict(),
            "diff": table_diff(derived_prop, published_prop),
        },
    }
    text = json.dumps(payload, sort_keys=True, indent=2)
    print(text)
    if args.out:
        write_json(_out_dir(args, config) / "derive.json", payload)
    return EXIT_OK


def cmd_invariant(args, config: RunConfig) -> int:
    params = config.params
    tgrid = config.time_grid()
    inv = config.invariant
    coeffs = solve_coefficients(
        config.schedule, params, tgrid,
        A=inv.A, E=inv.E, B0=inv.B0, C0=inv.C0, D0=inv.D0, F0=inv.F0,
    )
    scan = residual_scan(coeffs, config.schedule, params)
    rows = []
    for j, t in enumerate(tgrid.times()):
        rows.append(
            [t,
             coeffs.B[j].real, coeffs.B[j].imag,
             coeffs.C[j].real, coeffs.C[j].imag,
             coeffs.D[j].real, coeffs.D[j].imag,
             coeffs.F[j].real, coeffs.F[j].imag]
            + list(scan[j])
        )
    out = _out_dir(args, config)
    write_csv(
        out / "invariant.csv",
        ["t", "B_re", "B_im", "C_re", "C_im", "D_re", "D_im", "F_re", "F_im",
         "resid_1", "resid_x", "resid_p", "resid_p2", "resid_p3", "resid_p4"],
        rows,
    )
    worst = max(max(row[9:]) for row in rows)
    print(f"invariant: wrote {out / 'invariant.csv'} (max residual coefficient {worst:.3e})")
    return EXIT_OK


def cmd_eigen(args, config: RunConfig) -> int:
    params = config.params
    spec = config.eigen
    inv = config.invariant
    if config.n_steps >= 1:
        tgrid = config.time_grid()
        coeffs = solve_coefficients(
            config.schedule, params, tgrid,
            A=inv.A, E=inv.E, B0=inv.B0, C0=inv.C0, D0=inv.D0, F0=inv.F0,
        )
        frozen = coeffs.at(spec.frozen_step)
        frozen_time = float(tgrid.times()[spec.frozen_step])
    else:
        frozen = FrozenCoefficients(A=inv.A, B=inv.B0, C=inv.C0, D=inv.D0, E=inv.E, F=inv.F0)
        frozen_time = 0.0
    try:
        if spec.order == 0:
            phi = build_series_auto(
                frozen, params, spec.lam, spec.seeds, spec.half_width, frozen_time
            )
        else:
            phi = build_series(
                frozen, params, spec.lam, spec.seeds, spec.order, spec.half_width, frozen_time
            )
    except SeriesOverflowError as exc:
        print(f"eigen: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    out = _out_dir(args, config)
    write_csv(
        out / "eigen_coefficients.csv",
        ["n", "a_re", "a_im"],
        [[float(n), c.real, c.imag] for n, c in enumerate(phi.coeffs)],
    )
    xs = np.linspace(-spec.half_width, spec.half_width, spec.samples)
    values = evaluate(phi, xs)
    residuals = [eigen_residual(phi, frozen, params, [x]) for x in xs]
    write_csv(
        out / "eigen_profile.csv",
        ["x", "phi_re", "phi_im", "residual"],
        [[x, v.real, v.imag, r] for x, v, r in zip(xs, values, residuals)],
    )
    status = "converged" if phi.converged else "UNCONVERGED"
    print(
        f"eigen: order {phi.order}, tail {phi.tail:.3e}, {status}; wrote "
        f"{out / 'eigen_coefficients.csv'} and {out / 'eigen_profile.csv'}"
    )
    if not phi.converged:
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_propagate(args, config: RunConfig) -> int:
    params = config.params
    method = args.method or config.propagate.method
    psi0 = config.packet()
    out = _out_dir(args, config)
    header = ["t", "norm", "x_mean", "p_mean", "fidelity_vs_oracle"]

    def observables(psi: WaveFunction, t: float) -> list[float]:
        oracle = characteristics_propagate(
            psi0, config.schedule, params, t, config.propagate.n_quad
        )
        return [
            t,
            norm(psi),
            expectation(x_op(), psi).real,
            expectation(p_power(1), psi).real,
            fidelity(psi, oracle),
        ]

    if config.n_steps == 0:
        rows = [observables(psi0, 0.0)]
        final = psi0
    else:
        tgrid = config.time_grid()
        times = tgrid.times()
        idx = sorted({
            round(i * tgrid.n_steps / config.propagate.checkpoints)
            for i in range(config.propagate.checkpoints + 1)
        })
        if method == "weinorman":
            factors = solve_gammas(config.schedule, params, tgrid)
            states = {j: apply(factors, psi0, times[j]) for j in idx}
        elif method == "characteristics":
            states = {
                j: characteristics_propagate(
                    psi0, config.schedule, params, times[j], config.propagate.n_quad
                )
                for j in idx
            }
        elif method == "splitstep":
            trajectory = splitstep_propagate(psi0, config.schedule, params, tgrid)
            states = {j: trajectory[j] for j in idx}
        else:  # paper-literal
            factors = pub.published_gammas(config.schedule, params, tgrid)
            states = {j: apply(factors, psi0, times[j]) for j in idx}
        rows = [observables(states[j], times[j]) for j in idx]
        final = states[idx[-1]]

    write_csv(out / "propagate.csv", header, rows)
    print(f"propagate[{method}]: wrote {out / 'propagate.csv'}")
    if config.propagate.dump_psi:
        dump_psi(out / "psi_final.bin", final)
        write_csv(
            out / "psi_final.csv",
            ["x", "psi_re", "psi_im", "abs2"],
            [
                [x, v.real, v.imag, abs(v) ** 2]
                for x, v in zip(final.grid.x, final.values)
            ],
        )
        print(f"propagate[{method}]: wrote {out / 'psi_final.bin'} and {out / 'psi_final.csv'}")
    return EXIT_OK


def _print_checks(report: dict) -> None:
    for check in report["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        bounds = []
        if check["bound_low"] is not None:
            bounds.append(f">= {check['bound_low']:g}")
        if check["bound_high"] is not None:
            bounds.append(f"<= {check['bound_high']:g}")
        print(f"{status} {check['name']}: {check['value']:.6g} ({' and '.join(bounds)})")


def cmd_verify(args, config: RunConfig) -> int:
    report = run_verify(config)
    out = _out_dir(args, config)
    write_json(out / "report.json", report)
    _print_checks(report)
    print(("PASS" if report["passed"] else "FAIL") + f": report at {out / 'report.json'}")
    return EXIT_OK if report["passed"] else EXIT_TOLERANCE


def cmd_sweep(args, config: RunConfig) -> int:
    report = run_sweep(config)
    out = _out_dir(args, config)
    write_json(out / "report.json", report)
    _print_checks(report)
    print(("PASS" if report["passed"] else "FAIL") + f": report at {out / 'report.json'}")
    return EXIT_OK if report["passed"] else EXIT_TOLERANCE


_COMMANDS = {
    "derive": cmd_derive,
    "invariant": cmd_invariant,
    "eigen": cmd_eigen,
    "propagate": cmd_propagate,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="sse-td",
        description="Simulation and verification toolkit for the driven "
        "semi-relativistic Hamiltonian p^4/8eta^3 + p^2/2mu + f(t)x",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", help="TOML or JSON config file")
    parser.add_argument("--out", help="output directory (default from config)")
    parser.add_argument(
        "--method",
        choices=["weinorman", "characteristics", "splitstep", "paper-literal"],
        help="propagation method (propagate subcommand)",
    )
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        if config.n_steps == 0 and args.command in ("invariant", "verify", "sweep"):
            raise ConfigError(f"time.n_steps: must be >= 1 for {args.command}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return _COMMANDS[args.command](args, config)
    except SeriesOverflowError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
