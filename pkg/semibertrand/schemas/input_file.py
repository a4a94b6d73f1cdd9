"""Curve and prescription input files.

Files are TOML with either a ``[curve]`` or a ``[curvatures]`` section and
optional ``[scan]`` and ``[offset]`` sections::

    [curve]
    space = "E1_3"
    components = ["2*sinh(s)", "2*cosh(s)", "sqrt(3)*s"]
    domain = [0.0, 2.0]

    [curvatures]
    space = "E2_4"
    k1 = "1"
    k2 = "3"
    k3 = "1"
    interval = [0.0, 2.0]
"""
import logging
import re
import sys

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib
from pathlib import Path
from typing import Any, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from semibertrand.core.exceptions import ExpressionSyntaxError, InputError, InputFileError
from semibertrand.models.curve import CurvaturePrescription, CurveSpec
from semibertrand.models.metric import PseudoFrame
from semibertrand.utils.constants import SPACES

logger = logging.getLogger(__name__)

DEFAULT_ALPHAS = tuple(-2.0 + 0.25 * i for i in range(17))

_TOML_POSITION = re.compile(r"at line (\d+), column (\d+)")


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


def _check_space(v: str) -> str:
    if v not in SPACES:
        raise ValueError(f"unknown space {v!r}; expected one of {', '.join(SPACES)}")
    return v


class CurveSection(_Section):
    space: str
    components: List[str] = Field(description="One expression in s per coordinate")
    domain: Tuple[float, float]

    @field_validator("space")
    @classmethod
    def known_space(cls, v: str) -> str:
        return _check_space(v)


class CurvaturesSection(_Section):
    space: str = "E2_4"
    k1: Union[str, float]
    k2: Optional[Union[str, float]] = None
    k3: Optional[Union[str, float]] = None
    interval: Tuple[float, float]
    initial_point: Optional[List[float]] = None
    initial_frame: Optional[List[List[float]]] = None

    @field_validator("space")
    @classmethod
    def known_space(cls, v: str) -> str:
        return _check_space(v)


class ScanSection(_Section):
    alphas: List[float] = Field(default_factory=lambda: list(DEFAULT_ALPHAS))


class OffsetSection(_Section):
    alpha: float


class InputDocument(_Section):
    """Raw file contents after TOML decoding."""

    curve: Optional[CurveSection] = None
    curvatures: Optional[CurvaturesSection] = None
    scan: Optional[ScanSection] = None
    offset: Optional[OffsetSection] = None

    @model_validator(mode="after")
    def one_source(self) -> "InputDocument":
        if (self.curve is None) == (self.curvatures is None):
            raise ValueError("exactly one of [curve] and [curvatures] is required")
        return self


class JobInput(BaseModel):
    """Parsed input ready for the pipeline."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    path: Path
    curve: Optional[CurveSpec] = None
    prescription: Optional[CurvaturePrescription] = None
    alphas: Tuple[float, ...] = DEFAULT_ALPHAS
    offset_alpha: Optional[float] = None


def _locate_key(text: str, section: Optional[str], key: Optional[str]) -> Tuple[Optional[int], Optional[int]]:
    """Line and column of ``key = ...`` inside ``[section]`` (or of the header)."""
    current = None
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("["):
            current = stripped.strip("[]").strip()
            if key is None and current == section:
                return number, line.index("[") + 1
            continue
        if current == section and key is not None and re.match(rf"{re.escape(key)}\s*=", stripped):
            return number, line.index(key) + 1
    return None, None


def _locate_expression(text: str, expression: str, offset: int) -> Tuple[Optional[int], Optional[int]]:
    for quote in ('"', "'"):
        needle = f"{quote}{expression}{quote}"
        for number, line in enumerate(text.splitlines(), start=1):
            column = line.find(needle)
            if column >= 0:
                return number, column + 2 + offset
    return None, None


def _decode(path: Path) -> Tuple[str, dict]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputFileError(f"cannot read input file: {e.strerror or e}", str(path))
    try:
        return text, tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        match = _TOML_POSITION.search(str(e))
        line, column = (int(match.group(1)), int(match.group(2))) if match else (None, None)
        raise InputFileError(f"malformed TOML: {e}", str(path), line, column)


def _validation_error(path: Path, text: str, e: ValidationError) -> InputFileError:
    error = e.errors()[0]
    loc = [str(part) for part in error["loc"]]
    section = loc[0] if loc else None
    key = loc[1] if len(loc) > 1 else None
    line, column = _locate_key(text, section, key)
    where = ".".join(loc) or "file"
    return InputFileError(f"{where}: {error['msg']}", str(path), line, column)


def _build(document: InputDocument) -> Tuple[Optional[CurveSpec], Optional[CurvaturePrescription]]:
    if document.curve is not None:
        section = document.curve
        metric = SPACES[section.space]
        return CurveSpec.analytic(metric, section.components, section.domain), None
    section = document.curvatures
    metric = SPACES[section.space]
    frame = None
    if section.initial_frame is not None:
        frame = PseudoFrame(vectors=section.initial_frame, metric=metric, expected_signs=metric.frenet_signs)
    prescription = CurvaturePrescription(
        metric=metric,
        k1=section.k1,
        k2=section.k2,
        k3=section.k3,
        interval=section.interval,
        initial_frame=frame,
        initial_point=section.initial_point,
    )
    return None, prescription


def load_input(path: Union[str, Path]) -> JobInput:
    """Read and validate an input file; every failure carries line/column when known."""
    path = Path(path)
    text, raw = _decode(path)
    try:
        document = InputDocument.model_validate(raw)
    except ValidationError as e:
        raise _validation_error(path, text, e)

    section_name = "curve" if document.curve is not None else "curvatures"
    try:
        curve, prescription = _build(document)
    except ExpressionSyntaxError as e:
        expression = e.details.get("text", "")
        line, column = _locate_expression(text, expression, e.offset)
        raise InputFileError(f"[{section_name}] {e.message}", str(path), line, column)
    except InputError as e:
        line, column = _locate_key(text, section_name, None)
        raise InputFileError(f"[{section_name}] {e.message}", str(path), line, column)
    except (ValidationError, ValueError) as e:
        line, column = _locate_key(text, section_name, "initial_frame")
        raise InputFileError(f"[{section_name}] {e}", str(path), line, column)

    alphas: Any = document.scan.alphas if document.scan is not None else DEFAULT_ALPHAS
    offset_alpha = document.offset.alpha if document.offset is not None else None
    logger.debug(f"loaded {section_name} input from {path}")
    return JobInput(
        path=path,
        curve=curve,
        prescription=prescription,
        alphas=tuple(float(a) for a in alphas),
        offset_alpha=offset_alpha,
    )
