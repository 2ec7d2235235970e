"""Acceptance gate: one test per criterion, each printing a pass/fail line.

The numbers come from the full cross-check suite at the default
configuration (session fixture); tolerances are pinned here, independent of
any config overrides.
"""

import json

from ssetd.cli import main

SMALL_CONFIG = """
[space]
n = 4096
half_width = 64.0

[packet]
p0 = 0.25
sigma = 1.5
"""


def _value(report, name):
    for check in report["checks"]:
        if check["name"] == name:
            return check["value"]
    raise KeyError(name)


def _gate(name, conditions):
    ok = all(flag for _, flag in conditions)
    print(f"[acceptance] {name}: {'PASS' if ok else 'FAIL'}")
    for label, flag in conditions:
        assert flag, f"{name}: {label}"


def test_algebra_exactness(verify_report):
    r = verify_report
    _gate(
        "algebra exactness and grid homomorphism",
        [
            ("antisymmetry exact on 1000 draws", _value(r, "algebra_antisymmetry_failures") == 0),
            ("bilinearity exact on 1000 draws", _value(r, "algebra_bilinearity_failures") == 0),
            ("jacobi exact on 1000 draws", _value(r, "algebra_jacobi_failures") == 0),
            ("homomorphism <= 1e-8", _value(r, "algebra_grid_homomorphism_rel") <= 1e-8),
        ],
    )


def test_derived_invariant_system(verify_report):
    r = verify_report
    conditions = [
        (
            f"residual < 1e-6 at dt = 1e-3 ({name})",
            _value(r, f"invariant_residual_{name}") < 1e-6,
        )
        for name in ("constant", "linear", "sinusoid")
    ]
    conditions += [
        (
            "published trajectories break invariance above 1e-2",
            _value(r, "published_invariant_residual_signature") > 1e-2,
        ),
        (
            "diff table marks Bdot/Cdot/Ddot MISMATCH, others MATCH",
            _value(r, "invariant_diff_rows_as_expected") == 1.0,
        ),
    ]
    _gate("derived invariant system vs published", conditions)


def test_expectation_constancy(verify_report):
    drift = _value(verify_report, "expectation_drift")
    _gate("expectation constancy along exact evolution", [("drift < 1e-6", drift < 1e-6)])


def test_propagator_factor_confirmation(verify_report):
    r = verify_report
    _gate(
        "factor confirmation",
        [
            ("gamma1 linear in t to 1e-12", _value(r, "gamma1_max_error") < 1e-12),
            ("gamma5 = -i F(t)/hbar to 1e-12", _value(r, "gamma5_max_error") < 1e-12),
            (
                "gamma3 matches the characteristics phase to 1e-10",
                _value(r, "gamma3_vs_characteristics_phase") < 1e-10,
            ),
        ],
    )


def test_oracle_agreement(verify_report):
    r = verify_report
    _gate(
        "ordered-product propagator vs exact oracle",
        [
            ("constant drive < 1e-8", _value(r, "oracle_agreement_constant") < 1e-8),
            ("linear drive < 1e-8", _value(r, "oracle_agreement_linear") < 1e-8),
            ("sinusoid drive < 1e-6", _value(r, "oracle_agreement_sinusoid") < 1e-6),
        ],
    )


def test_splitstep_convergence(verify_report):
    r = verify_report
    orders = [_value(r, "splitstep_order_0"), _value(r, "splitstep_order_1")]
    _gate(
        "split-step order against the exact oracle",
        [(f"order {o:.3f} within 2.0 +/- 0.2", 1.8 <= o <= 2.2) for o in orders],
    )


def test_unitarity(verify_report):
    r = verify_report
    _gate(
        "unitarity",
        [
            ("ordered-product norm drift < 1e-10", _value(r, "norm_drift_weinorman") < 1e-10),
            ("exact-oracle norm drift < 1e-10", _value(r, "norm_drift_characteristics") < 1e-10),
            ("derived factors purely imaginary (< 1e-12)", _value(r, "re_gamma_derived_max") < 1e-12),
            (
                "published g3 flagged non-imaginary",
                _value(r, "published_gamma3_nonimaginary") > 1e-12,
            ),
        ],
    )


def test_schrodinger_residual(verify_report):
    r = verify_report
    orders = [
        _value(r, "schrodinger_residual_order_0"),
        _value(r, "schrodinger_residual_order_1"),
    ]
    conditions = [(f"order {o:.3f} within 2.0 +/- 0.3", 1.7 <= o <= 2.3) for o in orders]
    conditions.append(
        (
            "published factors plateau above 1e-3",
            _value(r, "published_residual_plateau") > 1e-3,
        )
    )
    _gate("finite-difference defect of the factor equation", conditions)


def test_series_recurrence_and_closed_form(verify_report):
    r = verify_report
    _gate(
        "power-series solver",
        [
            (
                "back-substitution identity to 1e-13",
                _value(r, "series_recurrence_residual") < 1e-13,
            ),
            ("exp closed form at x=1 to 1e-10", _value(r, "series_exp_value_error") < 1e-10),
            ("exp eigen-residual on [-1,1] < 1e-9", _value(r, "series_exp_eigen_residual") < 1e-9),
            ("seed additivity exact", _value(r, "series_seed_additivity_defect") == 0.0),
        ],
    )


def test_lr_phase(verify_report):
    r = verify_report
    _gate(
        "expectation-value phase",
        [
            (
                "stationary state reproduces -E0 t/hbar (trapezoid-exact)",
                _value(r, "lr_stationary_error") < 1e-10,
            ),
            (
                "self-convergence order >= 2 (0.1 measurement slack)",
                _value(r, "lr_self_convergence_order") >= 1.9,
            ),
        ],
    )


def test_verify_is_deterministic(tmp_path):
    cfg = tmp_path / "cfg.toml"
    cfg.write_text(SMALL_CONFIG, encoding="utf-8")
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    code1 = main(["verify", "--config", str(cfg), "--out", str(out1)])
    code2 = main(["verify", "--config", str(cfg), "--out", str(out2)])
    bytes1 = (out1 / "report.json").read_bytes()
    bytes2 = (out2 / "report.json").read_bytes()
    report = json.loads(bytes1)
    _gate(
        "determinism of the verification pipeline",
        [
            ("verify exits 0 twice", code1 == 0 and code2 == 0),
            ("report.json byte-identical across runs", bytes1 == bytes2),
            ("report marks every check passed", report["passed"] is True),
        ],
    )


def test_full_report_passes(verify_report):
    failed = [c["name"] for c in verify_report["checks"] if not c["passed"]]
    _gate("full default-configuration suite", [(f"failing checks: {failed}", not failed)])
