import json
import math

import numpy as np
import pytest

from mlqsp import cli, cost, filters, qsp
from mlqsp.pipeline import TRACE_COLUMNS, RunReport
from mlqsp.tables import read_csv


def _run(tmp_path, *argv):
    return cli.main([*argv, "--output-dir", str(tmp_path)])


def test_solve_golden_target(tmp_path):
    assert _run(tmp_path, "solve-phases", "--kind", "golden") == 0
    res = json.loads((tmp_path / "residual.json").read_text())
    assert res["residual"] <= 1e-8
    phases = qsp.PhaseFactorSet.from_json(json.loads((tmp_path / "phases.json").read_text()))
    assert phases.degree == 20


def test_solve_constant_target(tmp_path):
    phi0 = 0.3
    target = tmp_path / "t.json"
    target.write_text(json.dumps({"kind": "constant", "value": math.cos(phi0)}))
    assert _run(tmp_path, "solve-phases", "--target", str(target)) == 0
    phases = qsp.PhaseFactorSet.from_json(json.loads((tmp_path / "phases.json").read_text()))
    assert qsp.qsp_poly_values(phases.qsp_phases, [0.2])[0] == pytest.approx(math.cos(phi0), abs=1e-15)


def test_solve_infeasible_target_exit_2(tmp_path):
    target = tmp_path / "t.json"
    target.write_text(json.dumps({"kind": "constant", "value": 1.5}))
    assert _run(tmp_path, "solve-phases", "--target", str(target)) == 2


def test_solver_failure_exit_3(tmp_path):
    assert _run(tmp_path, "solve-phases", "--kind", "golden", "--tol", "1e-30") == 3
    assert json.loads((tmp_path / "residual.json").read_text())["status"] == "failed"


def test_missing_file_exit_2(tmp_path):
    assert _run(tmp_path, "run", "--config", str(tmp_path / "nope.json")) == 2


def test_bad_config_key_exit_2(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    assert _run(tmp_path, "run", "--config", str(cfg)) == 2


def test_build_filter_round_trip(tmp_path):
    assert _run(tmp_path, "build-filter", "--kind", "level", "--eps", "1e-2") == 0
    doc = json.loads((tmp_path / "filter.json").read_text())
    f = filters.FilterPolynomial.from_json(doc)
    assert doc["validation"]["band_error"] <= 1e-2
    assert f.degree == doc["degree"]


def test_build_fourier_filter(tmp_path):
    assert _run(tmp_path, "build-filter", "--kind", "fourier", "--mu", "2.0", "--eps", "1e-2") == 0
    f = filters.FourierFilter.from_json(json.loads((tmp_path / "filter.json").read_text()))
    assert abs(f(0.0) - 1) <= 1e-2


def test_run_default_trace(tmp_path):
    assert _run(tmp_path, "run") == 0
    header, rows = read_csv(tmp_path / "trace.csv")
    assert header == list(TRACE_COLUMNS)
    assert len(rows) == 5
    report = RunReport.from_json(json.loads((tmp_path / "report.json").read_text()))
    assert report.fidelity >= 0.99


def test_run_standard_single_stage(tmp_path):
    assert _run(tmp_path, "run", "--method", "standard_qsp") == 0
    _, rows = read_csv(tmp_path / "trace.csv")
    assert len(rows) == 1


def test_run_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["run", "--seed", "7", "--output-dir", str(a)]) == 0
    assert cli.main(["run", "--seed", "7", "--output-dir", str(b)]) == 0
    assert (a / "trace.csv").read_bytes() == (b / "trace.csv").read_bytes()
    assert b"\r" not in (a / "trace.csv").read_bytes()


def test_compare_small_grid(tmp_path):
    grid = tmp_path / "g.json"
    grid.write_text(json.dumps({"H_norm": [8.0, 16.0, 32.0], "gap": 1.0, "gamma": 0.2, "eps": 1e-2}))
    assert _run(tmp_path, "compare", "--grid", str(grid), "--curve-points", "200") == 0
    header, rows = read_csv(tmp_path / "scaling.csv")
    assert "simulated_queries" in header and len(rows) == 9
    ch, curve = read_csv(tmp_path / "filter_curve.csv")
    assert ch == ["lambda", "multilevel", "standard"] and len(curve) == 200
    vals = np.array(curve, dtype=float)
    assert abs(vals[0, 1] - 1) < 0.05 and abs(vals[-1, 1]) < 0.05


def test_compare_grid_of_one(tmp_path):
    grid = tmp_path / "g.json"
    grid.write_text(json.dumps([{"H_norm": 20.0}]))
    assert _run(tmp_path, "compare", "--grid", str(grid), "--methods", "multilevel",
                "--no-simulate", "--curve-points", "10") == 0
    _, rows = read_csv(tmp_path / "scaling.csv")
    assert len(rows) == 1


def test_compare_scaling_shapes():
    norms = [8.0, 16.0, 32.0, 64.0, 128.0, 256.0, 512.0, 1024.0]
    rows = cost.scaling_table(["multilevel", "standard_qsp"], {"H_norm": norms, "gamma": 0.2})
    ml = np.array([r["oracle_queries"] for r in rows if r["method"] == "multilevel"])
    sd = np.array([r["oracle_queries"] for r in rows if r["method"] == "standard_qsp"])
    # sublinear: per-||H|| cost falls; linear: per-||H|| cost constant
    assert np.all(np.diff(ml / norms) < 0)
    assert np.allclose(sd / norms, sd[0] / norms[0])


def test_inject_error_csv(tmp_path):
    assert _run(tmp_path, "inject-error", "--runs", "3", "--tau", "0.1") == 0
    header, rows = read_csv(tmp_path / "deviation.csv")
    assert len(rows) == 3
    assert all(r[header.index("within_bound")] == "true" for r in rows)
