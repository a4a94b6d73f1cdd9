"""Tests for reading curve and prescription files."""

import pytest

from semibertrand.core.exceptions import InputFileError
from semibertrand.models.metric import E1_2, E1_3, E2_4
from semibertrand.schemas.input_file import DEFAULT_ALPHAS, load_input


def _write(tmp_path, text: str):
    path = tmp_path / "input.toml"
    path.write_text(text)
    return path


def test_load_curve_file(fixture_dir):
    """Test an analytic E1_3 curve with default scan offsets."""
    job = load_input(fixture_dir / "helix_e13.toml")
    assert job.curve.metric == E1_3
    assert job.curve.domain == (0.0, 2.0)
    assert job.prescription is None
    assert job.alphas == DEFAULT_ALPHAS
    assert len(job.alphas) == 17
    assert job.offset_alpha is None


def test_load_prescription_file(fixture_dir):
    """Test a constant E2_4 prescription with an explicit scan."""
    job = load_input(fixture_dir / "constant_131.toml")
    assert job.curve is None
    assert job.prescription.metric == E2_4
    assert job.prescription.interval == (0.0, 2.0)
    assert job.alphas[0] == -2.0 and job.alphas[-1] == 2.0


def test_load_offset_section(fixture_dir):
    """Test the [offset] section of the plane curve file."""
    job = load_input(fixture_dir / "planar_e12.toml")
    assert job.curve.metric == E1_2
    assert job.offset_alpha == 0.5


def test_prescription_with_initial_data(tmp_path):
    """Test numbers as curvatures together with an initial point and frame."""
    path = _write(
        tmp_path,
        '[curvatures]\nspace = "E1_2"\nk1 = 2.0\ninterval = [0.0, 1.0]\n'
        "initial_point = [1.0, 0.0]\ninitial_frame = [[1.0, 0.0], [0.0, 1.0]]\n",
    )
    job = load_input(path)
    assert list(job.prescription.point0()) == [1.0, 0.0]
    assert job.prescription.initial_frame.expected_signs == (-1, 1)


def test_malformed_toml_reports_position(tmp_path):
    """Test that a TOML syntax error carries its line and column."""
    path = _write(tmp_path, '[curve]\nspace = E1_3\ndomain = [0.0, 1.0]\n')
    with pytest.raises(InputFileError) as exc_info:
        load_input(path)
    assert exc_info.value.exit_code == 1
    assert exc_info.value.details["line"] == 2
    assert "column" in exc_info.value.details


def test_unknown_identifier_reports_column(tmp_path):
    """Test that an unknown function name points at its first character."""
    path = _write(tmp_path, '[curve]\nspace = "E1_3"\ncomponents = ["foo(s)", "0", "s"]\ndomain = [0.0, 1.0]\n')
    with pytest.raises(InputFileError) as exc_info:
        load_input(path)
    assert exc_info.value.details["line"] == 3
    assert exc_info.value.details["column"] == 16


def test_expression_syntax_error(tmp_path):
    """Test that an unbalanced parenthesis is located on its line."""
    path = _write(tmp_path, '[curve]\nspace = "E1_3"\ncomponents = ["2*sinh(s)", "2*cosh(s", "s"]\ndomain = [0.0, 1.0]\n')
    with pytest.raises(InputFileError) as exc_info:
        load_input(path)
    assert exc_info.value.details["line"] == 3


def test_unknown_space(tmp_path):
    """Test that the space must be one of the supported tags."""
    path = _write(tmp_path, '[curve]\nspace = "E3_5"\ncomponents = ["s"]\ndomain = [0.0, 1.0]\n')
    with pytest.raises(InputFileError) as exc_info:
        load_input(path)
    assert exc_info.value.details["line"] == 2
    assert "space" in exc_info.value.message


def test_unknown_key(tmp_path):
    """Test that misspelled keys are refused."""
    path = _write(tmp_path, '[curve]\nspace = "E1_2"\ncomponent = ["s", "0"]\ndomain = [0.0, 1.0]\n')
    with pytest.raises(InputFileError):
        load_input(path)


def test_component_count_must_match_space(tmp_path):
    """Test that E1_3 needs three components."""
    path = _write(tmp_path, '[curve]\nspace = "E1_3"\ncomponents = ["s", "0"]\ndomain = [0.0, 1.0]\n')
    with pytest.raises(InputFileError) as exc_info:
        load_input(path)
    assert exc_info.value.details["line"] == 1


def test_exactly_one_source_section(tmp_path):
    """Test that a file needs a curve or a prescription but not both."""
    path = _write(tmp_path, "[scan]\nalphas = [1.0]\n")
    with pytest.raises(InputFileError):
        load_input(path)


def test_missing_file(tmp_path):
    """Test that an unreadable path is an input error."""
    with pytest.raises(InputFileError) as exc_info:
        load_input(tmp_path / "absent.toml")
    assert exc_info.value.details["path"].endswith("absent.toml")
