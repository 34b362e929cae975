"""Command-line interface tests: outputs, exit codes, config round-trips."""

import json

import numpy as np
import pytest

from shapecurrents.cli import main
from shapecurrents.curve import circle, wiggly_circle
from shapecurrents.currents import CurrentVector


@pytest.fixture
def circle_csv(tmp_path):
    path = tmp_path / "circle.csv"
    path.write_text(circle(0.5, n=256).to_csv())
    return str(path)


@pytest.fixture
def wiggly_csv(tmp_path):
    path = tmp_path / "wiggly.csv"
    path.write_text(wiggly_circle(eps=0.05, omega=8, n=256).to_csv())
    return str(path)


def test_current_stdout_json(circle_csv, capsys):
    code = main(["current", circle_csv, "--monomial", "2", "--rule", "simpson"])
    assert code == 0
    out = capsys.readouterr().out
    f = CurrentVector.from_json(out)
    # entry against the area form y dx for a radius-1/2 circle
    assert abs(f.fx[2] - (-np.pi / 4)) < 1e-4
    assert abs(f.fx[0]) < 1e-12 and abs(f.fy[0]) < 1e-12


def test_current_out_file(circle_csv, tmp_path, capsys):
    out = tmp_path / "current.json"
    code = main(["current", circle_csv, "--monomial", "2", "--out", str(out)])
    assert code == 0
    assert capsys.readouterr().out == ""
    f = CurrentVector.from_json(out.read_text())
    assert f.fx.shape == (3,)


def test_distance_identical_curves_is_zero(circle_csv, capsys):
    code = main(["distance", circle_csv, circle_csv, "--mesh", "20"])
    assert code == 0
    assert float(capsys.readouterr().out) == 0.0


def test_distance_positive_and_order_dependent(circle_csv, wiggly_csv, capsys):
    assert main(["distance", circle_csv, wiggly_csv, "--mesh", "20"]) == 0
    d1 = float(capsys.readouterr().out)
    assert main(["distance", circle_csv, wiggly_csv, "--mesh", "20",
                 "--s", "2"]) == 0
    d2 = float(capsys.readouterr().out)
    assert 0 < d2 < d1


def test_missing_curve_file_is_io_error(tmp_path, capsys):
    code = main(["current", str(tmp_path / "nope.csv"), "--monomial", "2"])
    assert code == 3
    assert "error" in capsys.readouterr().err


def test_malformed_curve_file_is_io_error(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("t,x,y\n0.0,1.0\n")
    code = main(["current", str(bad), "--monomial", "2"])
    assert code == 3


def test_unknown_preset_lists_presets(capsys):
    code = main(["experiment", "no-such-preset"])
    assert code == 2
    err = capsys.readouterr().err
    assert "unknown preset" in err
    assert "supercircle-norms" in err


def test_unknown_subcommand_is_usage_error(capsys):
    assert main(["frobnicate"]) == 2
    capsys.readouterr()


def test_curve_out_of_domain_is_numeric_error(tmp_path, capsys):
    path = tmp_path / "big.csv"
    path.write_text(circle(5.0, n=64).to_csv())
    code = main(["current", str(path), "--mesh", "10"])
    assert code == 4
    assert "error" in capsys.readouterr().err


def test_experiment_writes_artifacts(tmp_path, capsys):
    out = tmp_path / "run"
    code = main(["experiment", "supercircle-norms", "--out", str(out),
                 "--mesh", "20", "--points", "128"])
    assert code == 0
    summary = json.loads(capsys.readouterr().out)
    preset_dir = out / "supercircle-norms"
    for name in ("norms.csv", "summary.json", "config.json", "manifest.json"):
        assert (preset_dir / name).exists()
    manifest = json.loads((preset_dir / "manifest.json").read_text())
    assert manifest["preset"] == "supercircle-norms"
    assert "sq_norm_h1" in summary


def test_experiment_config_round_trip(tmp_path, capsys):
    out1 = tmp_path / "first"
    assert main(["experiment", "supercircle-norms", "--out", str(out1),
                 "--mesh", "20", "--points", "128"]) == 0
    capsys.readouterr()
    cfg = out1 / "supercircle-norms" / "config.json"
    out2 = tmp_path / "second"
    assert main(["experiment", "--config", str(cfg), "--out", str(out2)]) == 0
    capsys.readouterr()
    a = (out1 / "supercircle-norms" / "norms.csv").read_text()
    b = (out2 / "supercircle-norms" / "norms.csv").read_text()
    assert a == b
