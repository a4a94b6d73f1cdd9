"""Tests for report tables and files."""

import json

import numpy as np
import pytest
from pydantic import ValidationError

from semibertrand.core.exceptions import ReportWriteError
from semibertrand.services.frenet_service import frenet_apparatus
from semibertrand.services.reporting_service import (
    ReportBundle,
    Table,
    apparatus_table,
    emit_report,
    format_number,
    trajectory_table,
    write_csv,
    write_json,
)


def test_table_checks_width():
    """Test that every row needs one value per column."""
    table = Table(columns=["a", "b"], rows=[[1.0, 2.0], [3.0, 4.0]])
    assert len(table) == 2
    with pytest.raises(ValidationError):
        Table(columns=["a", "b", "c"], rows=[[1.0, 2.0]])


def test_apparatus_table_layout(helix_curve):
    """Test the header and shape of an E1_3 apparatus table."""
    table = apparatus_table(frenet_apparatus(helix_curve, grid_size=16))
    assert table.columns[0] == "s"
    assert table.columns[-2:] == ["k1", "k2"]
    assert len(table.columns) == 1 + 9 + 2
    assert table.rows.shape == (16, 12)


def test_trajectory_table_has_points(constant_131_trajectory):
    """Test that synthesis tables carry the point coordinates after s."""
    table = trajectory_table(constant_131_trajectory)
    assert table.columns[:5] == ["s", "x_0", "x_1", "x_2", "x_3"]
    assert len(table) == 2001
    assert np.array_equal(table.rows[:, 1:5], constant_131_trajectory.points)


def test_format_number_keeps_round_trip_precision():
    """Test 17 significant digits."""
    x = 0.1 + 0.2
    assert float(format_number(x)) == x
    assert format_number(1.5) == "1.5"


def test_write_csv(tmp_path):
    """Test the CSV header and number formatting."""
    path = write_csv(Table(columns=["s", "k1"], rows=[[0.0, 1.0 / 3.0]]), tmp_path / "t.csv")
    assert path.read_text() == "s,k1\n0,0.33333333333333331\n"


def test_write_json_is_flat_and_sorted(tmp_path):
    """Test key order and conversion of numpy values and non-finite numbers."""
    summary = {"b": np.float64(2.5), "a": np.int64(3), "c": float("nan"), "d": np.inf, "e": np.bool_(True)}
    path = write_json(summary, tmp_path / "s.json")
    assert json.loads(path.read_text()) == {"a": 3, "b": 2.5, "c": None, "d": None, "e": True}
    assert path.read_text().index('"a"') < path.read_text().index('"b"')


def test_emit_report_writes_summary_and_tables(tmp_path):
    """Test file names and byte-identical reruns."""
    bundle = ReportBundle(summary={"x": 1.0}, tables={"frenet": Table(columns=["s"], rows=[0.0, 0.5])})
    first = emit_report(bundle, tmp_path / "out", "frenet")
    assert [p.name for p in first] == ["frenet.json", "frenet.csv"]
    contents = [p.read_bytes() for p in first]
    emit_report(bundle, tmp_path / "out", "frenet")
    assert [p.read_bytes() for p in first] == contents


def test_emit_report_to_unwritable_location(tmp_path):
    """Test that an output path blocked by a file is a write error."""
    blocker = tmp_path / "blocker"
    blocker.write_text("not a directory")
    with pytest.raises(ReportWriteError) as exc_info:
        emit_report(ReportBundle(summary={"x": 1}), blocker / "reports", "classify")
    assert exc_info.value.exit_code == 1
