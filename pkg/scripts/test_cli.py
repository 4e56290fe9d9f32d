import json
import math

import numpy as np
import pandas as pd
import pytest

from config import settings
from main import main
from services.errors import EXIT_OK, EXIT_USAGE


def _pair(fixtures_dir, left, right):
    return ["--input", str(fixtures_dir / left), "--input", str(fixtures_dir / right)]


@pytest.fixture
def two_level_args(fixtures_dir):
    return _pair(fixtures_dir, "classical_two_level_p.json", "classical_two_level_q.json")


def test_compute_identical_states_is_zero(fixtures_dir, tmp_path):
    out = tmp_path / "out.csv"
    code = main(["compute", *_pair(fixtures_dir, "identical.json", "identical.json"),
                 "--family", "standard", "--family", "sandwiched", "--alpha", "0.5", "--out", str(out)])
    assert code == EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["family", "alpha", "value", "method", "residual"]
    assert frame["value"].abs().max() <= 1e-12


def test_compute_regularized_matches_chernoff(two_level_args, tmp_path):
    out = tmp_path / "out.csv"
    code = main(["compute", *two_level_args, "--family", "regularized-test", "--family", "chernoff",
                 "--alpha", "0.5", "--out", str(out)])
    assert code == EXIT_OK
    values = pd.read_csv(out).set_index("family")["value"]
    assert values["regularized-test"] == pytest.approx(values["chernoff"], abs=1e-7)


def test_compute_all_families_on_pure_states(fixtures_dir, tmp_path):
    out = tmp_path / "out.json"
    code = main(["compute", *_pair(fixtures_dir, "pure_overlap_half_a.json", "pure_overlap_half_b.json"),
                 "--family", "all", "--alpha", "0.3", "--restarts", "1", "--format", "json", "--out", str(out)])
    assert code == EXIT_OK
    rows = {row["family"]: row for row in json.loads(out.read_text())}
    assert set(rows) == {"standard", "sandwiched", "measured", "test", "relative-entropy", "D0", "Dmax",
                         "chernoff", "regularized-test"}
    assert rows["regularized-test"]["value"] == pytest.approx(math.log(2), abs=1e-7)
    assert rows["test"]["value"] == pytest.approx(math.log(2), abs=1e-4)
    assert rows["relative-entropy"]["value"] == "inf"
    assert rows["Dmax"]["value"] == "inf"
    assert rows["D0"]["alpha"] is None


def test_compute_accepts_alpha_above_one(two_level_args, tmp_path):
    out = tmp_path / "out.csv"
    assert main(["compute", *two_level_args, "--family", "standard", "--alpha", "2", "--out", str(out)]) == EXIT_OK
    assert pd.read_csv(out)["value"].iloc[0] > 0


def test_alpha_scan_columns(two_level_args, tmp_path):
    out = tmp_path / "scan.csv"
    code = main(["scan", *two_level_args, "--alpha-grid", "0.1:0.9:5", "--family", "standard",
                 "--family", "regularized-test", "--out", str(out)])
    assert code == EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["x", "standard", "regularized-test"]
    assert np.allclose(frame["x"], [0.1, 0.3, 0.5, 0.7, 0.9])
    assert frame["standard"].is_monotonic_increasing
    assert (frame["regularized-test"] <= frame["standard"] + 1e-9).all()


def test_hoeffding_scan_is_decreasing(two_level_args, tmp_path):
    out = tmp_path / "scan.csv"
    code = main(["scan", "--kind", "hoeffding", *two_level_args, "--r-grid", "0.01:0.12:6", "--out", str(out)])
    assert code == EXIT_OK
    frame = pd.read_csv(out)
    assert len(frame) == 6
    assert frame["value"].is_monotonic_decreasing


def test_hoeffding_scan_default_grid(two_level_args, tmp_path):
    out = tmp_path / "scan.csv"
    assert main(["scan", "--kind", "hoeffding", *two_level_args, "--out", str(out)]) == EXIT_OK
    assert len(pd.read_csv(out)) == 21


def test_ncopy_two_level_verdict(two_level_args, tmp_path):
    out = tmp_path / "ncopy.json"
    code = main(["ncopy", *two_level_args, "--alpha", "0.3", "--n-max", "3", "--format", "json", "--out", str(out)])
    assert code == EXIT_OK
    payload = json.loads(out.read_text())
    assert [row["n"] for row in payload["rows"]] == [1, 2, 3]
    assert payload["summary"]["verdict"] == "two-level"
    assert payload["summary"]["omega0"] == "0"
    assert payload["rows"][0]["gap_to_dalpha"] == pytest.approx(0.0, abs=1e-9)


def test_ncopy_identical_pair_is_zero(fixtures_dir, tmp_path):
    out = tmp_path / "ncopy.json"
    args = _pair(fixtures_dir, "classical_two_level_p.json", "classical_two_level_p.json")
    assert main(["ncopy", *args, "--alpha", "0.5", "--format", "json", "--out", str(out)]) == EXIT_OK
    payload = json.loads(out.read_text())
    assert all(row["dtest_per_copy"] == 0.0 for row in payload["rows"])
    assert payload["summary"]["verdict"] == "identical"


def test_ncopy_rejects_quantum_input(fixtures_dir, tmp_path):
    args = _pair(fixtures_dir, "noncommuting_a.json", "noncommuting_b.json")
    assert main(["ncopy", *args, "--alpha", "0.5", "--out", str(tmp_path / "x.csv")]) == EXIT_USAGE


def test_verify_single_check(tmp_path):
    out = tmp_path / "verify.csv"
    assert main(["verify", "--only", "skew-symmetry", "--trials", "3", "--out", str(out)]) == EXIT_OK
    frame = pd.read_csv(out)
    assert frame["check_id"].tolist() == ["skew-symmetry"]
    assert frame["passed"].all()


def test_hoeffding_test_command(two_level_args, tmp_path):
    out = tmp_path / "ht.csv"
    code = main(["hoeffding-test", *two_level_args, "--n", "4", "--r", "0.05", "--alpha", "0.5", "--out", str(out)])
    assert code == EXIT_OK
    row = pd.read_csv(out).iloc[0]
    assert bool(row["bounds_hold"])
    assert row["type_two_error"] <= row["type_two_bound"] + 1e-12


@pytest.mark.parametrize(
    "argv",
    [
        ["compute", "--bogus"],
        ["frobnicate"],
        ["hoeffding-test", "--n", "2"],
    ],
)
def test_argument_errors_exit_one(argv):
    assert main(argv) == EXIT_USAGE


def test_usage_errors_exit_one(two_level_args, fixtures_dir, tmp_path):
    out = str(tmp_path / "x.csv")
    single = ["--input", str(fixtures_dir / "classical_two_level_p.json")]
    assert main(["compute", *single, "--family", "standard", "--alpha", "0.5", "--out", out]) == EXIT_USAGE
    assert main(["compute", *two_level_args, "--family", "nope", "--alpha", "0.5", "--out", out]) == EXIT_USAGE
    assert main(["compute", *two_level_args, "--family", "test", "--alpha", "1.5", "--out", out]) == EXIT_USAGE
    assert main(["scan", *two_level_args, "--alpha", "1.5", "--out", out]) == EXIT_USAGE
    assert main(["scan", *two_level_args, "--alpha-grid", "0.1:0.9", "--out", out]) == EXIT_USAGE
    assert main(["ncopy", *two_level_args, "--alpha", "0.2", "--alpha", "0.4", "--out", out]) == EXIT_USAGE
    assert main(["verify", "--only", "no-such-check", "--out", out]) == EXIT_USAGE
    missing = ["--input", str(tmp_path / "missing.json"), "--input", str(tmp_path / "missing.json")]
    assert main(["compute", *missing, "--alpha", "0.5", "--out", out]) == EXIT_USAGE


def test_bad_tolerance_override_exits_one(monkeypatch, two_level_args, tmp_path):
    monkeypatch.delitem(settings.__dict__, "tolerances", raising=False)
    monkeypatch.setattr(settings, "tol_overrides", '{"golden": "loose"}')
    argv = ["compute", *two_level_args, "--family", "standard", "--alpha", "0.5", "--out", str(tmp_path / "x.csv")]
    assert main(argv) == EXIT_USAGE


def test_output_is_deterministic(fixtures_dir, tmp_path):
    args = _pair(fixtures_dir, "noncommuting_a.json", "noncommuting_b.json")
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (first, second):
        code = main(["compute", *args, "--family", "test", "--family", "measured", "--alpha", "0.6",
                     "--restarts", "1", "--seed", "5", "--out", str(out)])
        assert code == EXIT_OK
    assert first.read_text() == second.read_text()


def test_stdout_when_no_out(two_level_args, capsys):
    assert main(["compute", *two_level_args, "--family", "D0"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "family,alpha,value,method,residual"
    family, alpha, value = lines[1].split(",")[:3]
    assert (family, alpha) == ("D0", "")
    assert abs(float(value)) <= 1e-12
