import io
import json
import math

import numpy as np
import pandas as pd
import pytest

from models.operators import ClassicalState, DensityMatrix
from models.run_config import OutputFormat
from services.errors import StateFileError, UsageError
from services.operator_core import classical_state, density_matrix
from services.report_writer import emit, render_csv, render_json
from services.state_io import read_pair, read_state, require_classical, write_state


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(payload if isinstance(payload, str) else json.dumps(payload, indent=2))
    return path


def test_density_round_trip_is_exact(tmp_path, noncommuting_pair):
    rho, _ = noncommuting_pair
    path = tmp_path / "rho.json"
    write_state(path, rho)
    loaded = read_state(path)
    assert isinstance(loaded, DensityMatrix)
    assert np.array_equal(loaded.entries, rho.entries)


def test_classical_round_trip_keeps_labels(tmp_path):
    p = classical_state([0.1, 0.2, 0.7], ["x", "y", "z"])
    path = tmp_path / "p.json"
    write_state(path, p)
    loaded = read_state(path)
    assert isinstance(loaded, ClassicalState)
    assert loaded.labels == ("x", "y", "z")
    assert np.array_equal(loaded.weights, p.weights)


def test_fixture_files_load(fixtures_dir):
    for path in sorted(fixtures_dir.glob("*.json")):
        read_state(path)


def test_malformed_json_reports_line(tmp_path):
    path = _write(tmp_path, "bad.json", '{\n  "kind": "classical",\n  "weights": [0.5, 0.5,\n}\n')
    with pytest.raises(StateFileError) as excinfo:
        read_state(path)
    assert excinfo.value.line == 4
    assert "line 4" in str(excinfo.value)


def test_missing_file(tmp_path):
    with pytest.raises(StateFileError, match="cannot read file"):
        read_state(tmp_path / "nope.json")


def test_missing_field_reports_field(tmp_path):
    path = _write(tmp_path, "rho.json", {"kind": "density", "matrix": [[[1, 0]]]})
    with pytest.raises(StateFileError) as excinfo:
        read_state(path)
    assert excinfo.value.field == "density.dim"


def test_shape_mismatch(tmp_path):
    path = _write(tmp_path, "rho.json", {"kind": "density", "dim": 2, "matrix": [[[1, 0]]]})
    with pytest.raises(StateFileError, match="must be 2x2"):
        read_state(path)


def test_unknown_kind(tmp_path):
    path = _write(tmp_path, "rho.json", {"kind": "mixed", "weights": [1.0]})
    with pytest.raises(StateFileError):
        read_state(path)


def test_non_psd_matrix_reports_matrix_field(tmp_path):
    matrix = [[[1.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]]
    path = _write(tmp_path, "rho.json", {"kind": "density", "dim": 2, "matrix": matrix})
    with pytest.raises(StateFileError) as excinfo:
        read_state(path)
    assert excinfo.value.field == "matrix"


def test_bad_weights_report_weights_field(tmp_path):
    path = _write(tmp_path, "p.json", {"kind": "classical", "weights": [0.5, 0.6]})
    with pytest.raises(StateFileError) as excinfo:
        read_state(path)
    assert excinfo.value.field == "weights"


def test_classical_needs_exactly_one_source(tmp_path):
    path = _write(tmp_path, "p.json", {"kind": "classical"})
    with pytest.raises(StateFileError, match="exactly one"):
        read_state(path)


def test_classical_from_diagonal_matrix(tmp_path):
    matrix = [[[0.25, 0], [0, 0]], [[0, 0], [0.75, 0]]]
    path = _write(tmp_path, "p.json", {"kind": "classical", "dim": 2, "matrix": matrix, "labels": ["u", "v"]})
    state = read_state(path)
    assert isinstance(state, ClassicalState)
    assert state.labels == ("u", "v")
    assert np.allclose(state.weights, [0.25, 0.75])


def test_classical_matrix_must_be_diagonal(tmp_path):
    matrix = [[[0.5, 0], [0.1, 0]], [[0.1, 0], [0.5, 0]]]
    path = _write(tmp_path, "p.json", {"kind": "classical", "dim": 2, "matrix": matrix})
    with pytest.raises(StateFileError) as excinfo:
        read_state(path)
    assert excinfo.value.field == "matrix"


def test_read_pair_needs_two_inputs(fixtures_dir):
    with pytest.raises(UsageError):
        read_pair([fixtures_dir / "identical.json"])


def test_read_pair_mixes_classical_and_density(tmp_path, fixtures_dir):
    rho = density_matrix(np.diag([0.5, 0.5]))
    path = tmp_path / "rho.json"
    write_state(path, rho)
    left, right = read_pair([path, fixtures_dir / "classical_two_level_q.json"])
    assert isinstance(left, DensityMatrix) and isinstance(right, DensityMatrix)


def test_require_classical(two_level_pair, noncommuting_pair):
    p, q = two_level_pair
    left, right = require_classical(p, q)
    assert left is p and right is q
    diag = density_matrix(np.diag([0.3, 0.7]))
    converted, _ = require_classical(diag, diag)
    assert isinstance(converted, ClassicalState)
    with pytest.raises(UsageError, match="hoeffding-test"):
        require_classical(*noncommuting_pair)


def test_render_csv_infinity_and_empty_cells():
    text = render_csv([{"family": "Dmax", "alpha": None, "value": math.inf}], ["family", "alpha", "value"])
    assert text.splitlines() == ["family,alpha,value", "Dmax,,inf"]


def test_render_csv_full_precision():
    text = render_csv([{"value": 0.1 + 0.2}])
    assert float(text.splitlines()[1]) == 0.1 + 0.2


def test_render_json_infinity():
    payload = json.loads(render_json([{"value": math.inf, "alpha": np.float64(0.5)}]))
    assert payload == [{"value": "inf", "alpha": 0.5}]


def test_emit_writes_summary_block(tmp_path):
    out = tmp_path / "table.csv"
    emit([{"n": 1, "value": 0.5}], OutputFormat.CSV, out, summary={"verdict": "generic"})
    head, summary = out.read_text().split("\n\n")
    assert pd.read_csv(io.StringIO(head))["value"].tolist() == [0.5]
    assert summary.splitlines() == ["verdict", "generic"]


def test_emit_json_summary(tmp_path):
    out = tmp_path / "table.json"
    emit([{"n": 1}], OutputFormat.JSON, out, summary={"verdict": "two-level"})
    assert json.loads(out.read_text()) == {"rows": [{"n": 1}], "summary": {"verdict": "two-level"}}
