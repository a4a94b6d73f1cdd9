"""End-to-end tests of the command-line interface."""

import json

import pytest
from typer.testing import CliRunner

from semibertrand.cli import commands
from semibertrand.cli.main import app
from semibertrand.core.config import settings
from semibertrand.services.classical_service import fit_classical_relation
from semibertrand.utils.constants import VERIFICATION_KEYS

runner = CliRunner()


def _run(command, input_path, output, *options):
    return runner.invoke(app, [command, "-i", str(input_path), "-o", str(output), *options])


def _summary(output, command: str) -> dict:
    return json.loads((output / f"{command.replace('-', '_')}.json").read_text())


def test_help_lists_commands():
    """Test that the top-level help names every command."""
    result = runner.invoke(app, ["--help"])
    assert result.exit_code == 0
    for command in ("classify", "frenet", "synth", "fit-classical", "scan-classical", "bertrand-check"):
        assert command in result.output


def test_classify_timelike_curve(fixture_dir, tmp_path):
    """Test that the hyperbola is timelike with unit speed."""
    result = _run("classify", fixture_dir / "timelike_e24.toml", tmp_path)
    assert result.exit_code == 0
    summary = _summary(tmp_path, "classify")
    assert summary["character"] == "timelike"
    assert summary["speed_at_start"] == pytest.approx(1.0)
    assert summary["arclength"] == pytest.approx(1.0, abs=1e-10)
    assert summary["first_violation"] is None


def test_classify_null_curve(fixture_dir, tmp_path):
    """Test that a null line is reported without an arc length."""
    result = _run("classify", fixture_dir / "null_e24.toml", tmp_path)
    assert result.exit_code == 0
    summary = _summary(tmp_path, "classify")
    assert summary["character"] == "null"
    assert summary["first_violation"] == 0.0
    assert "arclength" not in summary


def test_frenet_table_has_one_row_per_sample(fixture_dir, tmp_path):
    """Test the frenet CSV against the requested grid."""
    result = _run("frenet", fixture_dir / "helix_e13.toml", tmp_path, "--grid", "32")
    assert result.exit_code == 0
    lines = (tmp_path / "frenet.csv").read_text().splitlines()
    assert lines[0].startswith("s,t_0,t_1,t_2,")
    assert len(lines) == 33
    summary = _summary(tmp_path, "frenet")
    assert summary["k1_min"] == pytest.approx(2.0, abs=1e-9)
    assert summary["k2_max"] == pytest.approx(-(3.0**0.5), abs=1e-9)


def test_frenet_on_non_timelike_curve(fixture_dir, tmp_path):
    """Test that the apparatus of a null curve is a rejection."""
    result = _run("frenet", fixture_dir / "null_e24.toml", tmp_path)
    assert result.exit_code == 2
    summary = _summary(tmp_path, "frenet")
    assert summary["error_code"] == "NON_TIMELIKE"


def test_reports_are_deterministic(fixture_dir, tmp_path):
    """Test that two runs write byte-identical files."""
    for name in ("a", "b"):
        assert _run("frenet", fixture_dir / "helix_e13.toml", tmp_path / name, "--grid", "64").exit_code == 0
    for file in ("frenet.json", "frenet.csv"):
        assert (tmp_path / "a" / file).read_bytes() == (tmp_path / "b" / file).read_bytes()


def test_synth_round_trip(fixture_dir, tmp_path):
    """Test that synthesized curvatures come back from the apparatus."""
    result = _run("synth", fixture_dir / "constant_131.toml", tmp_path, "--step", "0.01", "--grid", "101")
    assert result.exit_code == 0
    summary = _summary(tmp_path, "synth")
    assert summary["steps"] == 200
    assert summary["curvature_roundtrip"] < 1e-6
    assert len((tmp_path / "synth.csv").read_text().splitlines()) == 202


def test_synth_needs_prescription(fixture_dir, tmp_path):
    """Test that synth refuses a [curve] file."""
    result = _run("synth", fixture_dir / "helix_e13.toml", tmp_path)
    assert result.exit_code == 1
    assert _summary(tmp_path, "synth")["error_code"] == "MISSING_SECTION"


def test_fit_classical_on_helix(fixture_dir, tmp_path):
    """Test the classical constants of the E1_3 helix."""
    result = _run("fit-classical", fixture_dir / "helix_e13.toml", tmp_path, "--grid", "64")
    assert result.exit_code == 0
    summary = _summary(tmp_path, "fit-classical")
    assert summary["a"] == pytest.approx(2.0 / 7.0, abs=1e-8)
    assert summary["family_flag"] is True
    assert summary["normal_line_residual"] < 1e-6
    assert (tmp_path / "mate.csv").exists()


def test_fit_classical_uses_its_own_tolerance(fixture_dir, tmp_path, monkeypatch):
    """Test that --tol-eq does not replace CLASSICAL_FIT_TOL for the classical fit."""
    seen = {}

    def recording_fit(app, tol=None, margin=None):
        seen["tol"] = tol
        return fit_classical_relation(app, tol=tol, margin=margin)

    monkeypatch.setattr(settings, "CLASSICAL_FIT_TOL", 1e-3)
    monkeypatch.setattr(commands, "fit_classical_relation", recording_fit)
    result = _run("fit-classical", fixture_dir / "helix_e13.toml", tmp_path, "--grid", "64", "--tol-eq", "1e-14")
    assert result.exit_code == 0
    assert seen["tol"] == 1e-3


def test_fit_classical_on_plane_curve(fixture_dir, tmp_path):
    """Test the parallel curve of the plane fixture."""
    result = _run("fit-classical", fixture_dir / "planar_e12.toml", tmp_path)
    assert result.exit_code == 0
    summary = _summary(tmp_path, "fit-classical")
    assert summary["alpha"] == 0.5
    assert summary["normal_line_residual"] < 1e-6


def test_scan_classical(fixture_dir, tmp_path):
    """Test one scan row per offset and the zero offset value."""
    result = _run("scan-classical", fixture_dir / "constant_131.toml", tmp_path, "--grid", "401")
    assert result.exit_code == 0
    summary = _summary(tmp_path, "scan-classical")
    assert summary["offsets"] == 17
    assert summary["value_at_zero"] == 0.0
    assert summary["min_nonzero_alpha_value"] == pytest.approx(0.75, abs=1e-6)
    assert len((tmp_path / "scan.csv").read_text().splitlines()) == 18


def test_bertrand_check_accepts_with_hint(fixture_dir, tmp_path):
    """Test the (1, 3, 1) certificate for gamma = 1.5."""
    result = _run("bertrand-check", fixture_dir / "constant_131.toml", tmp_path, "--gamma-hint", "1.5", "--grid", "401")
    assert result.exit_code == 0
    summary = _summary(tmp_path, "bertrand-check")
    assert summary["accepted"] is True
    assert summary["beta"] == pytest.approx(5.0 / 3.0, abs=1e-8)


def test_bertrand_check_without_hint(fixture_dir, tmp_path):
    """Test that a constant-curvature family without a hint is an input error."""
    result = _run("bertrand-check", fixture_dir / "constant_131.toml", tmp_path, "--grid", "401")
    assert result.exit_code == 1
    assert _summary(tmp_path, "bertrand-check")["error_code"] == "MISSING_HINT"


def test_bertrand_check_rejects_linear_k2(fixture_dir, tmp_path):
    """Test that (1, s, 1) fails relation iii with exit status 2."""
    result = _run("bertrand-check", fixture_dir / "linear_k2.toml", tmp_path, "--grid", "401")
    assert result.exit_code == 2
    summary = _summary(tmp_path, "bertrand-check")
    assert summary["accepted"] is False
    assert summary["failed_condition"] == "iii"


def test_bertrand_check_hint_out_of_range(fixture_dir, tmp_path):
    """Test that gamma = 2 is rejected through delta."""
    result = _run("bertrand-check", fixture_dir / "constant_131.toml", tmp_path, "--gamma-hint", "2", "--grid", "401")
    assert result.exit_code == 2
    assert _summary(tmp_path, "bertrand-check")["failed_condition"] == "delta_range"


def test_bertrand_mate_reports_closed_forms(fixture_dir, tmp_path):
    """Test the mate length and constant curvatures of the (1, 3, 1) mate."""
    result = _run("bertrand-mate", fixture_dir / "constant_131.toml", tmp_path, "--gamma-hint", "1.5", "--grid", "401")
    assert result.exit_code == 0
    summary = _summary(tmp_path, "bertrand-mate")
    assert summary["mate_arclength"] == pytest.approx(2.98142397, abs=1e-6)
    assert summary["kbar2_min"] == pytest.approx(2.01246118, abs=1e-6)
    assert summary["speed_identity"] < 1e-8
    assert max(summary[f"trace_residual_{name}"] for name in "abpq") < 1e-6
    assert (tmp_path / "mate.csv").exists()
    assert (tmp_path / "mate_apparatus.csv").exists()


def test_bertrand_verify_keys(fixture_dir, tmp_path):
    """Test that verification writes every comparison key."""
    result = _run("bertrand-verify", fixture_dir / "constant_131.toml", tmp_path, "--gamma-hint", "1.5", "--grid", "401")
    assert result.exit_code == 0
    summary = _summary(tmp_path, "bertrand-verify")
    assert set(VERIFICATION_KEYS) <= set(summary)
    assert summary["plane_residual"] < 1e-5


def test_malformed_file_exit_status(tmp_path):
    """Test that a TOML error exits 1 and names line and column."""
    path = tmp_path / "bad.toml"
    path.write_text('[curve]\nspace = E1_3\n')
    result = _run("classify", path, tmp_path / "out")
    assert result.exit_code == 1
    summary = _summary(tmp_path / "out", "classify")
    assert summary["error_code"] == "INPUT_FILE_ERROR"
    assert summary["detail_line"] == 2
    assert "detail_column" in summary


def test_invalid_option(fixture_dir, tmp_path):
    """Test that a grid below 16 samples is refused before any work."""
    result = _run("frenet", fixture_dir / "helix_e13.toml", tmp_path, "--grid", "4")
    assert result.exit_code == 1
    assert not (tmp_path / "frenet.json").exists()


def test_unwritable_output(fixture_dir, tmp_path):
    """Test that a report directory blocked by a file exits 1."""
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    result = _run("classify", fixture_dir / "helix_e13.toml", blocker / "reports")
    assert result.exit_code == 1
