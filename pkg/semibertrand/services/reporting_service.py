"""Report files: apparatus tables as CSV, summaries as flat JSON objects.

Numbers in CSV files carry 17 significant digits; JSON keys are sorted. The
same results always produce byte-identical files.
"""
import csv
import json
import logging
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import Field, field_validator, model_validator

from semibertrand.core.config import settings
from semibertrand.core.exceptions import ReportWriteError
from semibertrand.models.base import BaseModel
from semibertrand.models.curve import CurveSpec, FrenetApparatus, FrenetTrajectory
from semibertrand.utils.constants import apparatus_columns

logger = logging.getLogger(__name__)


class Table(BaseModel):
    """Rectangular numeric table with named columns."""

    columns: List[str]
    rows: np.ndarray

    @field_validator("rows", mode="before")
    @classmethod
    def as_matrix(cls, v):
        rows = np.array(v, dtype=float)
        if rows.ndim == 1:
            rows = rows[:, None]
        rows.setflags(write=False)
        return rows

    @model_validator(mode="after")
    def check_width(self) -> "Table":
        if self.rows.shape[1] != len(self.columns):
            raise ValueError(f"table has {self.rows.shape[1]} columns but {len(self.columns)} names")
        return self

    def __len__(self) -> int:
        return self.rows.shape[0]


class ReportBundle(BaseModel):
    """Everything one job writes: a flat summary plus named tables."""

    summary: Dict[str, Any] = Field(default_factory=dict)
    tables: Dict[str, Table] = Field(default_factory=dict)
    rejected: bool = Field(default=False, description="Job ended in a mathematical rejection")


def apparatus_table(app: FrenetApparatus) -> Table:
    d = app.metric.dimension
    rows = np.column_stack([app.s, app.frames.reshape(len(app), d * d), app.curvatures()])
    return Table(columns=apparatus_columns(d), rows=rows)


def trajectory_table(trajectory: FrenetTrajectory) -> Table:
    """Points, frames and prescribed curvatures at every integration step."""
    d = trajectory.metric.dimension
    columns = apparatus_columns(d)
    columns[1:1] = [f"x_{i}" for i in range(d)]
    rows = np.column_stack(
        [trajectory.s, trajectory.points, trajectory.frames.reshape(len(trajectory.s), d * d), trajectory.curvatures]
    )
    return Table(columns=columns, rows=rows)


def curve_table(c: CurveSpec, parameter: str = "s") -> Table:
    """Sample table of a sampled curve."""
    d = c.metric.dimension
    return Table(columns=[parameter] + [f"x_{i}" for i in range(d)], rows=np.column_stack([c.parameters, c.points]))


def format_number(value: float, digits: Optional[int] = None) -> str:
    digits = settings.REPORT_DIGITS if digits is None else digits
    return format(float(value), f".{digits}g")


def _plain(value: Any) -> Any:
    """JSON-ready copy of ``value``."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return None
        return value
    return value


def write_csv(table: Table, path: Path) -> Path:
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([format_number(x) for x in row])
    return path


def write_json(summary: Dict[str, Any], path: Path) -> Path:
    text = json.dumps(_plain(summary), sort_keys=True, indent=2)
    path.write_text(text + "\n", encoding="utf-8")
    return path


def emit_report(bundle: ReportBundle, output: Path, name: str) -> Sequence[Path]:
    """Write ``<name>.json`` and one ``<table>.csv`` per table into ``output``."""
    output = Path(output)
    written: List[Path] = []
    try:
        output.mkdir(parents=True, exist_ok=True)
        written.append(write_json(bundle.summary, output / f"{name}.json"))
        for table_name, table in sorted(bundle.tables.items()):
            written.append(write_csv(table, output / f"{table_name}.csv"))
    except OSError as e:
        raise ReportWriteError(str(output), e.strerror or str(e))
    for path in written:
        logger.info(f"wrote {path}")
    return written
