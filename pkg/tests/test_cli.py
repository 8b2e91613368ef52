import io
import json

import pytest

from sphtherm.cli import EXIT_FAILED_VALIDATION, EXIT_INPUT_ERROR, EXIT_NOT_CONVERGED, EXIT_OK, main
from sphtherm.particles import read_field_csv

from conftest import fixture_path


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def test_simulate_slab(tmp_path):
    report = tmp_path / "report.json"
    code, text = run("simulate", fixture_path("slab.yaml"), "--dp", 0.002, "-q", "--report", report)
    assert code == EXIT_OK
    assert "L2D" in text and "Q internal" in text
    data = json.loads(report.read_text())
    assert data["summary"]["converged"] is True
    assert data["summary"]["l2d"] == pytest.approx(0.05 / (0.13 + 0.02 / 0.13 + 0.04), rel=0.03)


def test_malformed_profile_exits_with_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text(fixture_path("slab.yaml").read_text().replace("kind: external", "kind: adiabatic", 1)
                   .replace("[[0.0, 0.0], [0.02, 0.0]]", "[[0.0, 0.0], [0.01, 0.0]]"))
    code, _ = run("simulate", bad, "-q")
    assert code == EXIT_INPUT_ERROR
    assert "error: geometry:" in capsys.readouterr().err


def test_missing_file(capsys):
    code, _ = run("simulate", "/nonexistent/profile.yaml", "-q")
    assert code == EXIT_INPUT_ERROR
    assert "error:" in capsys.readouterr().err


def test_bad_configuration(capsys):
    code, _ = run("simulate", fixture_path("slab.yaml"), "--dp", -1, "-q")
    assert code == EXIT_INPUT_ERROR
    assert "particles:" in capsys.readouterr().err
    code, _ = run("simulate", fixture_path("slab.yaml"), "--dt-safety", 2, "-q")
    assert code == EXIT_INPUT_ERROR


def test_not_converged_still_writes_field(tmp_path, capsys):
    field = tmp_path / "field.csv"
    code, _ = run("simulate", fixture_path("slab.yaml"), "--dp", 0.002, "--max-steps", 1, "-q", "--field-csv", field)
    assert code == EXIT_NOT_CONVERGED
    assert "not converged" in capsys.readouterr().err
    xy, k, t = read_field_csv(field)
    assert len(xy) == 250


def test_export_field_only(tmp_path):
    field = tmp_path / "field.vtk"
    log = tmp_path / "conv.csv"
    code, text = run(
        "export-field", fixture_path("slab.yaml"), "--dp", 0.002, "-q", "--vtk", field, "--convergence-log", log
    )
    assert code == EXIT_OK and text == ""
    assert field.read_text().startswith("# vtk DataFile")
    assert log.read_text().startswith("step,residual\n")


def test_cavity_command():
    code, text = run("cavity", "-b", 0.03, "-d", 0.01, "--gap-width", 0.005, "--format", "csv")
    assert code == EXIT_OK
    header, row = text.strip().splitlines()
    values = dict(zip(header.split(","), row.split(",")))
    assert values["ventilation"] == "slightly-ventilated"
    assert float(values["k_eq"]) == pytest.approx(2 * 0.01 * (float(values["h_a"]) + float(values["h_r"])))
    code, text = run("cavity", "-b", 0.03, "-d", 0.01, "--gap-width", 0.02)
    assert code == EXIT_OK and "fully-ventilated" in text and "n/a" in text
    code, _ = run("cavity", "-b", -0.03, "-d", 0.01)
    assert code == EXIT_INPUT_ERROR


def test_validate_pass_and_fail(tmp_path):
    code, text = run("validate", fixture_path("slab_reference.yaml"), "--dp", 0.001, "-q")
    assert code == EXIT_OK and "pass" in text
    off = tmp_path / "off.yaml"
    off.write_text(fixture_path("slab_reference.yaml").read_text().replace("L2D: 0.15439429928741", "L2D: 0.17"))
    code, text = run("validate", off, "--dp", 0.001, "-q")
    assert code == EXIT_FAILED_VALIDATION and "FAIL" in text


def test_validate_without_reference(capsys):
    code, _ = run("validate", fixture_path("slab.yaml"), "-q")
    assert code == EXIT_INPUT_ERROR
    assert "reference_case" in capsys.readouterr().err


def test_reports_identical_across_thread_counts(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ("simulate", fixture_path("two_layer_slab.yaml"), "--dp", 0.002, "-q")
    assert run(*args, "--threads", 1, "--report", a)[0] == EXIT_OK
    assert run(*args, "--threads", 3, "--report", b)[0] == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
