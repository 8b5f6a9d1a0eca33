import json
import math
import subprocess
import sys

import numpy as np
import pytest
from click.testing import CliRunner

from paleywiener import (CoefficientTable, PolydiscDomain, RadialMeasure, apply_multiplier,
                         read_series_csv, theta_eval, write_series_csv)
from paleywiener.cli import load_config, main
from paleywiener.exceptions import ParameterError


@pytest.fixture
def run(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, [str(a) for a in args], catch_exceptions=False)

    return invoke


@pytest.fixture
def disc_json(tmp_path):
    path = tmp_path / "disc.json"
    path.write_text(json.dumps(RadialMeasure.disc(1.0).to_dict()))
    return path


@pytest.fixture
def point_json(tmp_path):
    path = tmp_path / "pointmass.json"
    path.write_text(json.dumps(RadialMeasure.point_mass(1.0).to_dict()))
    return path


def test_synth_factorial_decay_has_inverse_sqrt_factorial_coefficients(run, tmp_path):
    res = run("synth", "--family", "factorial", "--side", "decay", "--sigma", 1, "--N", 60,
              "--out", "F.csv")
    assert res.exit_code == 0, res.output
    F = read_series_csv(tmp_path / "F.csv")
    n = F.degrees
    assert np.allclose(F.log_mag, -0.5 * np.array([math.lgamma(k + 1) for k in n]), atol=1e-14)


def test_synth_then_classify(run, tmp_path):
    run("synth", "--family", "factorial", "--side", "decay", "--sigma", 1, "--N", 60,
        "--out", "F.csv")
    res = run("classify", "F.csv", "--out", "report.json")
    assert res.exit_code == 0
    report = json.loads((tmp_path / "report.json").read_text())
    v = report["verdict"]
    assert (v["family"], v["side"]) == ("factorial", "decay")
    assert v["order"] == pytest.approx(1.0, rel=0.05)


def test_classify_single_coefficient_is_indeterminate(run, tmp_path):
    write_series_csv(CoefficientTable.monomial((0,), degree=10), tmp_path / "one.csv")
    assert run("classify", "one.csv").exit_code == 2


def test_classify_garbled_file_reports_line(run, tmp_path):
    (tmp_path / "bad.csv").write_text("dim,degree,kind\n1,5,power-series\nalpha_1,log_mag,phase\n0,zz,0\n")
    res = run("classify", "bad.csv")
    assert res.exit_code == 1 and "line 4" in res.output


def test_classify_truncated_file(run, tmp_path):
    (tmp_path / "cut.csv").write_text("dim,deg")
    assert run("classify", "cut.csv").exit_code == 1


def test_apply_matches_module_op(run, tmp_path, disc_json):
    F = CoefficientTable.from_dense(np.arange(1, 12) * (1 + 0.5j), 1, 10)
    write_series_csv(F, tmp_path / "F.csv")
    res = run("apply", "--measure", disc_json, "--in", "F.csv", "--out", "G.csv")
    assert res.exit_code == 0
    G = read_series_csv(tmp_path / "G.csv")
    assert G == apply_multiplier(F, RadialMeasure.disc(1.0))
    res = run("invert", "--measure", disc_json, "--in", "G.csv", "--out", "H.csv")
    H = read_series_csv(tmp_path / "H.csv")
    assert np.max(np.abs(H.log_mag - F.log_mag)) < 1e-12


def test_theta_matches_theta_eval(run, tmp_path):
    F = CoefficientTable.from_dense([1.0, 0.5, 0.25j], 1, 2)
    write_series_csv(F, tmp_path / "F.csv")
    res = run("theta", "--in", "F.csv", "--radius", 1, "--grid", "-4:4:0.1", "--out", "t.csv")
    assert res.exit_code == 0
    rows = [line.split(",") for line in (tmp_path / "t.csv").read_text().splitlines()
            if line and not line.startswith("#")][1:]
    assert len(rows) == 81
    D = PolydiscDomain(1.0)
    for x, re_, im_ in rows[::10]:
        ref = theta_eval(F, D, float(x))
        assert complex(float(re_), float(im_)) == pytest.approx(ref, abs=1e-12)


def test_verify_t21_disc_passes(run, disc_json):
    res = run("verify", "T2-1", "--sigma", 1, "--measure", disc_json)
    assert res.exit_code == 0
    assert json.loads(res.output)["pass"] is True


def test_verify_out_of_range_echoes_hypothesis(run):
    res = run("verify", "T2-3", "--sigma", 0.75)
    assert res.exit_code == 1 and "requires σ < 1/2" in res.output


def test_verify_lemma_diagonal_point_mass(run, point_json):
    assert run("verify", "lemma-diagonal", "--measure", point_json).exit_code == 0


def test_sigma_and_bounds(run, disc_json):
    res = run("sigma", "--measure", disc_json, "--N", 10)
    assert res.exit_code == 0
    res = run("sigma", "--measure", disc_json, "--N", 40, "--bounds")
    assert res.exit_code == 0 and json.loads(res.output)["ok"] is True


def test_bargmann_point_evaluation(run, tmp_path):
    write_series_csv(CoefficientTable.monomial((2,), degree=2, kind="hermite-series"),
                     tmp_path / "h.csv")
    res = run("bargmann", "--in", "h.csv", "--point", "1+1j")
    assert res.exit_code == 0
    last = [line for line in res.output.splitlines() if line and not line.startswith("#")][-1]
    value = complex(*map(float, last.split(",")[-2:]))
    assert value == pytest.approx((1 + 1j) ** 2 / math.sqrt(2), rel=1e-9)


def test_bargmann_table_mode_recovers_coefficients(run, tmp_path):
    h = CoefficientTable.from_dense([0.5, 0.0, 1.0j], 1, 2, kind="hermite-series")
    write_series_csv(h, tmp_path / "h.csv")
    res = run("bargmann", "--in", "h.csv", "--N", 8, "--out", "F.csv")
    assert res.exit_code == 0
    F = read_series_csv(tmp_path / "F.csv")
    assert F.kind == "power-series"
    assert np.allclose(F.to_dense()[:3], h.to_dense(), atol=1e-12)


def test_outputs_carry_provenance(run, tmp_path):
    run("synth", "--family", "stretched", "--side", "decay", "--s", 0.25, "--N", 20, "--seed", 4,
        "--out", "F.csv")
    head = (tmp_path / "F.csv").read_text().splitlines()[:4]
    assert any("config-hash" in line for line in head) and any("seed" in line for line in head)


def test_config_file_and_flag_precedence(run, tmp_path):
    (tmp_path / "run.ini").write_text("[run]\ntruncation_degree = 12\nseed = 3\n")
    run("synth", "--family", "factorial", "--side", "growth", "--sigma", 2, "--config", "run.ini",
        "--out", "a.csv")
    assert read_series_csv(tmp_path / "a.csv").degree == 12
    run("synth", "--family", "factorial", "--side", "growth", "--sigma", 2, "--config", "run.ini",
        "--N", 15, "--out", "b.csv")
    assert read_series_csv(tmp_path / "b.csv").degree == 15


def test_load_config_validation(tmp_path):
    with pytest.raises(ParameterError):
        load_config(degree=4)
    with pytest.raises(ParameterError):
        load_config(dim=5)
    bad = tmp_path / "bad.ini"
    bad.write_text("[run]\ncolour = red\n")
    with pytest.raises(ParameterError):
        load_config(bad)


def test_bad_parameters_exit_one(run, tmp_path):
    assert run("synth", "--family", "factorial", "--side", "decay", "--N", 20).exit_code == 1
    assert run("sigma", "--N", 20, "--dim", 9).exit_code == 1


def test_reruns_are_byte_identical(run, tmp_path, disc_json):
    outputs = []
    for k in range(2):
        run("synth", "--family", "stretched", "--side", "decay", "--s", 0.25, "--N", 30,
            "--seed", 9, "--out", f"F{k}.csv")
        run("apply", "--measure", disc_json, "--in", f"F{k}.csv", "--out", f"G{k}.csv")
        outputs.append([(tmp_path / f"{n}{k}.csv").read_bytes() for n in "FG"])
    assert outputs[0] == outputs[1]


def test_console_script_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "paleywiener.cli", "--version"],
                         capture_output=True, text=True, cwd=tmp_path)
    assert res.returncode == 0 and "0.1.0" in res.stdout


def test_sigma_of_distributional_measure_is_signed(run, tmp_path):
    from paleywiener.measures import sigma_distributional

    spec = {"dim": 1, "body": {"type": "distributional-point",
                               "terms": [{"radius": 1.0, "order": 1, "coefficient": 0.5}]}}
    (tmp_path / "dist.json").write_text(json.dumps(spec))
    res = run("sigma", "--measure", "dist.json", "--N", 8, "--out", "s.csv")
    assert res.exit_code == 0, res.output
    rows = [line.split(",") for line in (tmp_path / "s.csv").read_text().splitlines()
            if line and not line.startswith("#")][1:]
    nu = RadialMeasure.from_dict(spec)
    for a, v, lv in rows:
        ref = sigma_distributional(nu, (int(a),))
        assert float(v) == pytest.approx(ref, rel=1e-14)
        assert float(lv) == pytest.approx(math.log(abs(ref)), rel=1e-14)
    assert run("sigma", "--measure", "dist.json", "--N", 8, "--bounds").exit_code == 1
