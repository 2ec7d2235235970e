import json
from pathlib import Path

import numpy as np
import pytest

from ssetd.cli import main, read_psi
from ssetd.config import ConfigError, default_config, parse_config

SMALL = """
[space]
n = 4096
half_width = 64.0

[packet]
p0 = 0.25
sigma = 1.5
"""


def test_empty_config_gives_defaults():
    cfg = parse_config("")
    assert cfg.params.m1 == 1.0 and cfg.params.hbar == 1.0
    assert cfg.schedule.kind == "constant" and cfg.schedule.f0 == 0.2
    assert cfg.n_steps == 400 and cfg.t_end == 2.0
    assert cfg.invariant.A == 1.0 and cfg.invariant.E == 1.0
    assert cfg.propagate.method == "weinorman"


def test_schedule_inline_table_syntax():
    cfg = parse_config('f = {kind = "sinusoid", f0 = 0.5, omega = 2.0, phi = 0.0}')
    assert cfg.schedule.kind == "sinusoid"
    assert cfg.schedule.omega == 2.0


def test_json_container_accepted():
    cfg = parse_config(json.dumps({"physical": {"m1": 2.0, "m2": 3.0}}))
    assert cfg.params.mu == pytest.approx(6.0 / 5.0)


def test_negative_mass_names_key():
    with pytest.raises(ConfigError, match="physical.m1"):
        parse_config("[physical]\nm1 = -1.0\n")


def test_sinusoid_missing_omega_names_key():
    with pytest.raises(ConfigError, match="f.omega"):
        parse_config('f = {kind = "sinusoid", f0 = 0.5}')


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError, match="space.nn"):
        parse_config("[space]\nnn = 7\n")
    with pytest.raises(ConfigError, match="banana"):
        parse_config("banana = 1\n")


def test_type_mismatches_name_key():
    with pytest.raises(ConfigError, match="time.n_steps"):
        parse_config("[time]\nn_steps = 2.5\n")
    with pytest.raises(ConfigError, match="invariant.A"):
        parse_config('[invariant]\nA = "one"\n')


def test_complex_entries_parse():
    cfg = parse_config("[invariant]\nA = [0.0, 1.0]\nE = 2.0\n")
    assert cfg.invariant.A == 1j
    assert cfg.invariant.E == 2.0 + 0j


def test_malformed_text_rejected():
    with pytest.raises(ConfigError):
        parse_config("[space\nn = 3")
    with pytest.raises(ConfigError):
        parse_config('{"space": ')


def _write(tmp_path: Path, text: str, name: str = "cfg.toml") -> str:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_cli_config_error_exit_code(tmp_path, capsys):
    cfg = _write(tmp_path, "[physical]\nm1 = -2.0\n")
    out = tmp_path / "never"
    assert main(["verify", "--config", cfg, "--out", str(out)]) == 2
    assert "physical.m1" in capsys.readouterr().err
    assert not out.exists()  # fail-fast: nothing is written on invalid config


def test_cli_missing_config_file(tmp_path, capsys):
    assert main(["verify", "--config", str(tmp_path / "absent.toml")]) == 2


def test_cli_zero_steps_only_valid_for_propagate(tmp_path, capsys):
    cfg = _write(tmp_path, "[time]\nt_end = 0.0\nn_steps = 0\n")
    assert main(["invariant", "--config", cfg, "--out", str(tmp_path / "o")]) == 2
    assert "time.n_steps" in capsys.readouterr().err


def test_cli_derive_emits_tables_and_diff(tmp_path, capsys):
    out = tmp_path / "o"
    assert main(["derive", "--out", str(out)]) == 0
    payload = json.loads(capsys.readouterr().out)
    statuses = {r["symbol"]: r["status"] for r in payload["invariant"]["diff"]}
    assert statuses["Bdot"] == "MISMATCH"
    assert statuses["Cdot"] == "MISMATCH"
    assert statuses["Ddot"] == "MISMATCH"
    assert statuses["Fdot"] == "MATCH"
    pstat = {r["symbol"]: r["status"] for r in payload["propagator"]["diff"]}
    assert pstat["gamma3dot"] == "MISMATCH"
    assert pstat["gamma6dot"] == "MISMATCH"
    assert pstat["gamma5dot"] == "MATCH"
    on_disk = json.loads((out / "derive.json").read_text())
    assert on_disk == payload
    rows = {r["symbol"]: r for r in payload["invariant"]["derived"]["rows"]}
    assert {"coeff": [4.0, 0.0], "monomial": ["A", "f"]} in rows["Bdot"]["terms"]


def test_cli_invariant_csv(tmp_path):
    cfg = _write(tmp_path, SMALL + "\n[time]\nt_end = 1.0\nn_steps = 50\n")
    out = tmp_path / "o"
    assert main(["invariant", "--config", cfg, "--out", str(out)]) == 0
    lines = (out / "invariant.csv").read_text().splitlines()
    assert lines[0].split(",")[:3] == ["t", "B_re", "B_im"]
    assert len(lines) == 52  # header + 51 instants


def test_cli_eigen_outputs(tmp_path):
    cfg = _write(tmp_path, SMALL + '\n[eigen]\nlambda = 1.0\nseeds = [1.0, 0.0, 0.0, 0.0]\nL = 4.0\n')
    out = tmp_path / "o"
    assert main(["eigen", "--config", cfg, "--out", str(out)]) == 0
    coeff_lines = (out / "eigen_coefficients.csv").read_text().splitlines()
    assert coeff_lines[0] == "n,a_re,a_im"
    profile = (out / "eigen_profile.csv").read_text().splitlines()
    assert profile[0] == "x,phi_re,phi_im,residual"
    assert len(profile) == 202


@pytest.mark.parametrize("method", ["weinorman", "characteristics", "splitstep", "paper-literal"])
def test_cli_propagate_methods(tmp_path, method):
    cfg = _write(
        tmp_path,
        SMALL + "\n[time]\nt_end = 1.0\nn_steps = 100\n[propagate]\ncheckpoints = 4\ndump_psi = true\n",
    )
    out = tmp_path / method
    assert main(["propagate", "--config", cfg, "--out", str(out), "--method", method]) == 0
    lines = (out / "propagate.csv").read_text().splitlines()
    assert lines[0] == "t,norm,x_mean,p_mean,fidelity_vs_oracle"
    assert len(lines) == 6  # header + 5 checkpoints
    values, flag = read_psi(out / "psi_final.bin")
    assert values.shape == (4096,)
    assert flag == 0
    first = [float(v) for v in lines[1].split(",")]
    assert first[1] == pytest.approx(1.0, abs=1e-12)


def test_cli_propagate_zero_steps_echo(tmp_path):
    cfg = _write(
        tmp_path,
        SMALL + "\n[time]\nt_end = 0.0\nn_steps = 0\n[propagate]\ndump_psi = true\n",
    )
    out = tmp_path / "o"
    assert main(["propagate", "--config", cfg, "--out", str(out), "--method", "splitstep"]) == 0
    lines = (out / "propagate.csv").read_text().splitlines()
    assert len(lines) == 2 and lines[1].startswith("0.0,")
    values, _ = read_psi(out / "psi_final.bin")
    cfg_obj = parse_config(Path(cfg).read_text())
    assert np.max(np.abs(values - cfg_obj.packet().values)) == 0.0


def test_cli_binary_dump_layout(tmp_path):
    cfg = _write(tmp_path, SMALL + "\n[time]\nn_steps = 10\n[propagate]\ndump_psi = true\ncheckpoints = 2\n")
    out = tmp_path / "o"
    assert main(["propagate", "--config", cfg, "--out", str(out)]) == 0
    blob = (out / "psi_final.bin").read_bytes()
    assert blob[:8] == b"SSEQPSI1"
    n = int.from_bytes(blob[8:12], "little")
    assert n == 4096
    assert len(blob) == 16 + 16 * n


def test_cli_eigen_overflow_exit_code(tmp_path, capsys):
    cfg = _write(
        tmp_path,
        SMALL + "\n[eigen]\nlambda = 1e300\nN = 256\nL = 8.0\n",
    )
    assert main(["eigen", "--config", cfg, "--out", str(tmp_path / "o")]) == 3
    assert "non-finite series coefficient" in capsys.readouterr().err


def test_cli_eigen_unconverged_exit_code(tmp_path, capsys):
    # A fixed low order on a wide domain cannot certify its tail.
    cfg = _write(
        tmp_path,
        SMALL + "\n[eigen]\nlambda = 1.0\nN = 8\nL = 8.0\nseeds = [1.0, 1.0, 0.5, 0.125]\n",
    )
    assert main(["eigen", "--config", cfg, "--out", str(tmp_path / "o")]) == 3
    assert "UNCONVERGED" in capsys.readouterr().out


def test_cli_verify_fails_on_impossible_tolerance(tmp_path):
    cfg = _write(tmp_path, SMALL + "\n[tolerances]\nexpectation_drift = 1e-30\n")
    out = tmp_path / "o"
    assert main(["verify", "--config", cfg, "--out", str(out)]) == 1
    report = json.loads((out / "report.json").read_text())
    assert report["passed"] is False


def test_cli_propagate_outputs_deterministic(tmp_path):
    cfg = _write(
        tmp_path,
        SMALL + "\n[time]\nn_steps = 50\n[propagate]\ndump_psi = true\ncheckpoints = 5\n",
    )
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert main(["propagate", "--config", cfg, "--out", str(out)]) == 0
        outs.append(out)
    for fname in ("propagate.csv", "psi_final.bin", "psi_final.csv"):
        assert (outs[0] / fname).read_bytes() == (outs[1] / fname).read_bytes()


def test_cli_sweep_orders(tmp_path):
    cfg = _write(tmp_path, SMALL + "\n[sweep]\nbase_steps = 50\nrefinements = 3\n")
    out = tmp_path / "o"
    assert main(["sweep", "--config", cfg, "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    for order in report["orders"]["splitstep"]:
        assert 1.8 <= order <= 2.2
    for order in report["orders"]["invariance_residual"]:
        assert 3.5 <= order <= 4.5


def test_default_config_matches_parse_of_empty():
    assert default_config().raw == {}
