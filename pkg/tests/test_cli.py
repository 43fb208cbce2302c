"""
tests/test_cli.py

Date: 2026-10-18

End-to-end runs of the command line through cli.run(): report contents,
formats, config merging, archiving and exit codes.
"""

import io
import json

import numpy as np
import pytest

from cli import run
from cli.common import attach_negative_values
from config.settings import Settings
from models.behavior import distances, stein_core
from models.repositories.report_repo import InMemoryReportRepository


def _run(argv, settings=None, reports=None):
    out = io.StringIO()
    code = run(argv, settings or Settings(), reports, stdout=out)
    return code, out.getvalue()


def _json(argv, settings=None):
    code, text = _run(argv, settings)
    assert code == 0, text
    return json.loads(text)


def test_solve_centered_identity():
    report = _json(["solve", "--h", "x", "--target", "centered", "--nu", "1", "--grid", "-2:2:0.5"])
    assert report["command"] == "solve"
    assert report["seed"] is None
    f = report["result"]["points"]["f"]
    assert len(f) == 9
    assert np.allclose(f, -1.0, atol=1e-9)
    assert report["result"]["max_abs_residual"] < 1e-8


def test_solve_as_csv():
    code, text = _run(["solve", "--h", "arctan", "--r", "2", "--grid", "0:1:0.5", "--format", "csv"])
    assert code == 0
    lines = text.strip().split("\n")
    assert lines[0] == "x,f,fprime,residual"
    assert len(lines) == 4


def test_centered_target_needs_nu():
    code, _ = _run(["solve", "--h", "x", "--target", "centered"])
    assert code == 2


def test_unknown_test_function():
    code, _ = _run(["solve", "--h", "nope"])
    assert code == 2


def test_negative_grid_with_space_or_equals():
    spaced = _json(["solve", "--h", "min0", "--r", "1", "--grid", "-10:10:0.01"])
    joined = _json(["solve", "--h", "min0", "--r", "1", "--grid=-10:10:0.01"])
    assert spaced["result"] == joined["result"]
    assert spaced["config"]["grid"] == "-10:10:0.01"


def test_negative_grid_on_certify():
    report = _json(["certify", "--h", "min0", "--r", "1", "--grid", "-10:10:0.01"])
    assert report["result"]["passed"] is True


def test_attach_negative_values():
    argv = ["solve", "--grid", "-2:2:0.5", "--h", "x", "--r", "-.5,1", "--timing", "--threads", "2"]
    assert attach_negative_values(argv) == [
        "solve", "--grid=-2:2:0.5", "--h", "x", "--r=-.5,1", "--timing", "--threads", "2"
    ]
    assert attach_negative_values(["solve", "--grid=-1:1:0.5", "--bogus", "-x"]) == [
        "solve", "--grid=-1:1:0.5", "--bogus", "-x"
    ]


def test_bad_grid():
    code, _ = _run(["solve", "--h", "x", "--grid", "1:0:0.1"])
    assert code == 2


def test_usage_errors():
    assert _run([])[0] == 2
    assert _run(["solve", "--bogus"])[0] == 2


def test_certify_passes():
    report = _json(["certify", "--h", "x,arctan", "--r", "1,2", "--grid", "-3:3:0.1"])
    result = report["result"]
    assert result["passed"] is True
    assert len(result["reports"]) == 4
    assert all(r["pass"] for r in result["reports"])


def test_certify_centered_and_first_order():
    report = _json(["certify", "--h", "smooth_min0", "--nu", "1,3", "--grid", "-3:3:0.1", "--first-order"])
    reports = report["result"]["reports"]
    assert len(reports) == 2
    assert all("lip_fprime" not in r["theorem"] for r in reports)


def test_certify_explosion():
    report = _json(["certify", "--explosion", "--r", "0.1"])
    witness = report["result"]["witnesses"][0]
    assert witness["value"] >= 6.06
    assert witness["value_source"] == "closed_form_double_integral"
    assert "bounded_solution_derivative" in witness
    assert report["result"]["passed"] is True


def test_certify_has_no_csv():
    code, _ = _run(["certify", "--explosion", "--r", "1", "--format", "csv"])
    assert code == 2


def test_hoeffding_with_oracle():
    report = _json(["hoeffding", "--family", "rademacher-quadratic", "--n", "4", "--oracle"])
    result = report["result"]
    assert result["degeneracy"]["ok"] is True
    assert result["component_stats"]["rho2"] == pytest.approx(1.0)
    assert result["oracle_max_difference"] < 1e-12
    assert result["reconstruction_error"] < 1e-12


def test_hoeffding_needs_a_single_n():
    code, _ = _run(["hoeffding", "--family", "rademacher-quadratic", "--n", "4,5"])
    assert code == 2


def test_dejong_bound_with_checks():
    report = _json(["dejong", "--action", "bound", "--family", "rademacher-quadratic", "--n", "6", "--checks"])
    result = report["result"]
    assert result["moment_identities"]["ok"] is True
    assert result["exchangeability"]["ok"] is True
    assert result["chain_inequality"]["variance_chain_holds"] is True
    assert result["bound"]["D"] == pytest.approx(1.0)


def test_dejong_require_policy_without_constant():
    code, _ = _run(["dejong", "--action", "bound", "--family", "rademacher-quadratic", "--n", "4", "--policy", "require"])
    assert code == 2


def test_dejong_demo_defaults_to_csv():
    code, text = _run(["dejong", "--family", "rademacher-quadratic", "--n", "4,6"])
    assert code == 0
    lines = text.strip().split("\n")
    assert lines[0].startswith("n,mode,moment_discrepancy,rho2,D,bound")
    assert [line.split(",")[0] for line in lines[1:]] == ["4", "6"]


def test_dejong_exact_only_above_cap():
    code, _ = _run(
        ["dejong", "--family", "rademacher-quadratic", "--n", "8", "--exact-only"], Settings(enum_cap=100)
    )
    assert code == 3


def test_gauss_identity_has_zero_bound():
    report = _json(["chaos", "--model", "gauss", "--kernel", "identity_nu", "--nu", "3", "--samples", "10000"])
    result = report["result"]
    assert result["functional"]["variance"] == pytest.approx(6.0)
    assert result["result"]["bound"] == pytest.approx(0.0, abs=1e-12)
    assert report["seed"] == 0


def test_poisson_indicator_cubic_term():
    report = _json(
        ["chaos", "--model", "poisson", "--kernel", "indicator", "--nu", "2", "--cells", "16", "--samples", "2000"]
    )
    assert report["result"]["result"]["cubic_term"] == pytest.approx(8.0)
    assert report["result"]["functional"]["cells"] == 16


def test_chaos_nu_defaults_to_half_the_variance():
    report = _json(["chaos", "--model", "gauss", "--kernel", "eigenvalues", "--values", "1,1", "--samples", "10000"])
    assert report["result"]["result"]["nu"] == pytest.approx(2.0)


def test_unknown_kernel_family():
    code, _ = _run(["chaos", "--model", "gauss", "--kernel", "nope"])
    assert code == 2


def test_chaos_ibp():
    report = _json(
        ["chaos", "--model", "gauss", "--kernel", "identity_nu", "--nu", "2", "--ibp", "arctan", "--samples", "20000"]
    )
    assert report["result"]["model"] == "gauss"
    assert report["result"]["ok"] is True


def test_chaos_trend():
    report = _json(["chaos", "--model", "gauss", "--nu", "2", "--trend", "0.3,0.1,0", "--samples", "10000"])
    l1 = report["result"]["l1_term"]
    assert l1[0] > l1[1] > l1[2]
    assert l1[2] == pytest.approx(0.0, abs=1e-12)


def test_results_do_not_depend_on_threads():
    argv = ["chaos", "--model", "gauss", "--kernel", "eigenvalues", "--values", "1,0.5", "--samples", "20000", "--seed", "4"]
    _, one = _run(argv + ["--threads", "1"])
    _, four = _run(argv + ["--threads", "4"])
    assert json.loads(one)["result"] == json.loads(four)["result"]
    assert json.loads(one)["config_hash"] == json.loads(four)["config_hash"]


def test_distance_against_target(tmp_path):
    path = tmp_path / "samples.json"
    path.write_text(json.dumps([-1.0, 0.0, 1.0, 2.0]), encoding="utf-8")
    report = _json(["distance", "--samples", str(path), "--nu", "2"])
    result = report["result"]
    assert result["n_samples"] == 4
    assert result["d2_dictionary"]["value"] <= result["d1"]["value"] + 1e-9
    assert 0.0 <= result["kolmogorov"]["value"] <= 1.0


def test_distance_needs_exactly_one_reference(tmp_path):
    path = tmp_path / "samples.csv"
    path.write_text("1.0\n2.0\n", encoding="utf-8")
    assert _run(["distance", "--samples", str(path)])[0] == 2
    assert _run(["distance", "--samples", str(tmp_path / "missing.json"), "--nu", "1"])[0] == 2


def test_config_file_with_flag_override(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"h": "x", "target": "centered", "nu": 1.0, "grid": "0:1:0.5"}), encoding="utf-8")
    report = _json(["solve", "--config", str(config), "--nu", "3"])
    assert report["config"]["nu"] == 3.0
    assert report["result"]["solution"]["params"]["nu"] == 3.0


def test_bad_config_file(tmp_path):
    config = tmp_path / "run.json"
    config.write_text("{not json", encoding="utf-8")
    assert _run(["solve", "--config", str(config)])[0] == 2


def test_output_file_and_timing(tmp_path):
    target = tmp_path / "out.json"
    code, text = _run(["certify", "--explosion", "--r", "1", "--output", str(target), "--timing"])
    assert code == 0
    assert text == ""
    report = json.loads(target.read_text(encoding="utf-8"))
    assert report["wall_time"] >= 0.0
    assert "output" not in report["config"]


def test_runs_are_archived():
    reports = InMemoryReportRepository()
    _run(["certify", "--explosion", "--r", "0.5"], reports=reports)
    _run(["solve", "--h", "nope"], reports=reports)
    runs = reports.list_recent()
    assert len(runs) == 1
    assert runs[0].command == "certify"
    assert runs[0].report["result"]["passed"] is True


def test_quadrature_tolerance_comes_from_settings(monkeypatch, tmp_path):
    seen = []
    original = stein_core.expected_h

    def recording(h, p, epsabs=stein_core.EXPECTATION_EPSABS):
        seen.append(epsabs)
        return original(h, p, epsabs)

    monkeypatch.setattr(stein_core, "expected_h", recording)
    monkeypatch.setattr(distances, "expected_h", recording)

    argv = ["solve", "--h", "arctan", "--r", "2", "--grid", "0:1:0.5"]
    _json(argv, Settings(quad_tol=3e-9))
    assert seen and set(seen) == {3e-9}
    # nothing carries over into the next run
    seen.clear()
    _json(argv)
    assert seen and set(seen) == {1e-12}

    path = tmp_path / "samples.json"
    path.write_text(json.dumps([-1.0, 0.0, 1.0, 2.0]), encoding="utf-8")
    seen.clear()
    _json(["distance", "--samples", str(path), "--nu", "2"], Settings(quad_tol=3e-9))
    assert seen and set(seen) == {3e-9}
