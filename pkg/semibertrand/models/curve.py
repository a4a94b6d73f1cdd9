"""Curve, apparatus and curvature-prescription records."""
from typing import Any, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import Field, field_validator, model_validator

from semibertrand.core.exceptions import DimensionMismatchError, InputError
from semibertrand.dsl.ast import Expr, constant
from semibertrand.dsl.parser import parse_expr
from semibertrand.models.base import BaseModel
from semibertrand.models.metric import PseudoFrame, SemiMetric


def _readonly(arr) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


def _as_expr(e: Union[str, Expr]) -> Expr:
    return parse_expr(e) if isinstance(e, str) else e


class CurveSpec(BaseModel):
    """A parametric curve given by expressions or by a sample table.

    In sampled mode ``derivative_table[i, j]`` holds the j-th parameter
    derivative (j = 0..4) at ``parameters[i]`` when it is known exactly.
    """

    metric: SemiMetric
    domain: Tuple[float, float] = Field(description="Closed parameter interval")
    components: Optional[Tuple[Any, ...]] = Field(default=None, description="Component expressions")
    parameters: Optional[np.ndarray] = Field(default=None, description="Sample parameters, increasing")
    points: Optional[np.ndarray] = Field(default=None, description="Sample coordinates, one row each")
    derivative_table: Optional[np.ndarray] = Field(default=None, description="Shape (N, 5, dimension)")
    unit_speed: bool = Field(default=False, description="Parameter is arc length")

    @field_validator("parameters", "points", "derivative_table", mode="before")
    @classmethod
    def as_array(cls, v):
        return None if v is None else _readonly(v)

    @model_validator(mode="after")
    def check_mode(self) -> "CurveSpec":
        lo, hi = self.domain
        if not lo < hi:
            raise InputError(f"empty domain [{lo}, {hi}]", error_code="INVALID_DOMAIN")
        d = self.metric.dimension
        if self.components is not None:
            if len(self.components) != d:
                raise DimensionMismatchError(d, len(self.components), "component list")
            return self
        if self.parameters is None or self.points is None:
            raise InputError("a curve needs components or a sample table", error_code="INVALID_CURVE")
        if self.points.shape != (len(self.parameters), d):
            raise DimensionMismatchError(d, self.points.shape[-1], "sample row")
        if len(self.parameters) < 2 or np.any(np.diff(self.parameters) <= 0):
            raise InputError("sample parameters must be strictly increasing", error_code="INVALID_SAMPLES")
        if self.derivative_table is not None and self.derivative_table.shape != (len(self.parameters), 5, d):
            raise InputError("derivative table must have shape (N, 5, dimension)", error_code="INVALID_SAMPLES")
        return self

    @classmethod
    def analytic(
        cls, metric: SemiMetric, components: Sequence[Union[str, Expr]], domain: Tuple[float, float]
    ) -> "CurveSpec":
        return cls(metric=metric, domain=tuple(domain), components=tuple(_as_expr(e) for e in components))

    @classmethod
    def sampled(
        cls,
        metric: SemiMetric,
        parameters,
        points,
        derivative_table=None,
        unit_speed: bool = False,
    ) -> "CurveSpec":
        parameters = np.asarray(parameters, dtype=float)
        return cls(
            metric=metric,
            domain=(float(parameters[0]), float(parameters[-1])),
            parameters=parameters,
            points=points,
            derivative_table=derivative_table,
            unit_speed=unit_speed,
        )

    @property
    def is_analytic(self) -> bool:
        return self.components is not None

    @property
    def mode(self) -> str:
        return "analytic" if self.is_analytic else "sampled"


class CausalProfile(BaseModel):
    """Causal character of the velocity over a dense parameter grid."""

    metric: SemiMetric
    counts: dict = Field(description="Samples per causal character")
    first_violation: Optional[float] = Field(default=None, description="First non-timelike parameter")
    first_violation_character: Optional[str] = None

    @property
    def character(self) -> str:
        present = [name for name, n in self.counts.items() if n]
        return present[0] if len(present) == 1 else "mixed"


class FrenetApparatus(BaseModel):
    """Frame and curvatures sampled along a unit-speed timelike curve."""

    metric: SemiMetric
    s: np.ndarray = Field(description="Arc length of each sample")
    parameters: np.ndarray = Field(description="Original curve parameter of each sample")
    frames: np.ndarray = Field(description="Shape (N, d, d); rows t, n1, n2, n3")
    k1: np.ndarray
    k2: Optional[np.ndarray] = None
    k3: Optional[np.ndarray] = None
    orientation_flipped: bool = Field(default=False, description="Some frame needed its last vector flipped")

    @field_validator("s", "parameters", "frames", "k1", "k2", "k3", mode="before")
    @classmethod
    def as_array(cls, v):
        return None if v is None else _readonly(v)

    @model_validator(mode="after")
    def check_shapes(self) -> "FrenetApparatus":
        n, d = len(self.s), self.metric.dimension
        if self.frames.shape != (n, d, d):
            raise ValueError("frames must have shape (N, d, d)")
        if (self.k2 is None) != (d < 3) or (self.k3 is None) != (d < 4):
            raise ValueError("one curvature per frame vector after t")
        return self

    def __len__(self) -> int:
        return len(self.s)

    @property
    def t(self) -> np.ndarray:
        return self.frames[:, 0]

    @property
    def n1(self) -> np.ndarray:
        return self.frames[:, 1]

    @property
    def n2(self) -> np.ndarray:
        return self.frames[:, 2]

    @property
    def n3(self) -> np.ndarray:
        return self.frames[:, 3]

    def curvatures(self) -> np.ndarray:
        """Shape (N, d - 1)."""
        ks = [k for k in (self.k1, self.k2, self.k3) if k is not None]
        return np.stack(ks, axis=1)

    def frame_at(self, i: int) -> PseudoFrame:
        return PseudoFrame(vectors=self.frames[i], metric=self.metric, expected_signs=self.metric.frenet_signs)

    def gram_residual(self) -> float:
        """Largest deviation of any frame's Gram matrix from the Frenet signs."""
        gram = np.einsum("nik,k,njk->nij", self.frames, self.metric.signature, self.frames)
        return float(np.max(np.abs(gram - np.diag(self.metric.frenet_signs))))


class CurvaturePrescription(BaseModel):
    """Curvature functions to be realized by a synthesized curve."""

    metric: SemiMetric
    k1: Any = Field(description="Curvature expression")
    k2: Any = Field(default=None, description="Curvature expression (absent in E1_2)")
    k3: Any = Field(default=None, description="Curvature expression (E2_4 only)")
    interval: Tuple[float, float] = Field(description="Arc-length interval [0, S]")
    initial_frame: Optional[PseudoFrame] = None
    initial_point: Optional[np.ndarray] = None

    @field_validator("k1", "k2", "k3", mode="before")
    @classmethod
    def parse_curvature(cls, v):
        if v is None:
            return None
        if isinstance(v, (int, float)):
            return constant(float(v))
        return _as_expr(v)

    @field_validator("initial_point", mode="before")
    @classmethod
    def as_point(cls, v):
        return None if v is None else _readonly(v)

    @model_validator(mode="after")
    def check_prescription(self) -> "CurvaturePrescription":
        d = self.metric.dimension
        lo, hi = self.interval
        if not lo < hi:
            raise InputError(f"empty interval [{lo}, {hi}]", error_code="INVALID_DOMAIN")
        needed = d - 1
        given = sum(k is not None for k in (self.k1, self.k2, self.k3))
        if given != needed:
            raise DimensionMismatchError(needed, given, "curvature list")
        if self.initial_point is not None and self.initial_point.shape != (d,):
            raise DimensionMismatchError(d, self.initial_point.shape[-1], "initial point")
        if self.initial_frame is not None and self.initial_frame.vectors.shape != (d, d):
            raise DimensionMismatchError(d, len(self.initial_frame), "initial frame")
        return self

    @property
    def curvature_exprs(self) -> Tuple[Expr, ...]:
        return tuple(k for k in (self.k1, self.k2, self.k3) if k is not None)

    def frame0(self) -> np.ndarray:
        if self.initial_frame is not None:
            return np.array(self.initial_frame.vectors)
        return np.eye(self.metric.dimension)

    def point0(self) -> np.ndarray:
        if self.initial_point is not None:
            return np.array(self.initial_point)
        return np.zeros(self.metric.dimension)


class FrenetTrajectory(BaseModel):
    """Output of integrating the Frenet system alongside c' = t."""

    metric: SemiMetric
    s: np.ndarray
    points: np.ndarray
    frames: np.ndarray = Field(description="Shape (N, d, d)")
    curvatures: np.ndarray = Field(description="Prescribed curvatures at each step, shape (N, d - 1)")
    gram_residuals: np.ndarray = Field(description="Gram residual after each step")
    derivative_table: np.ndarray = Field(description="Exact arc-length derivatives, shape (N, 5, d)")
    step: float

    @field_validator("s", "points", "frames", "curvatures", "gram_residuals", "derivative_table", mode="before")
    @classmethod
    def as_array(cls, v):
        return _readonly(v)

    def apparatus(self) -> FrenetApparatus:
        """The integrator's own frames and prescribed curvatures."""
        k = self.curvatures
        return FrenetApparatus(
            metric=self.metric,
            s=self.s,
            parameters=self.s,
            frames=self.frames,
            k1=k[:, 0],
            k2=k[:, 1] if k.shape[1] > 1 else None,
            k3=k[:, 2] if k.shape[1] > 2 else None,
        )

    def to_curve(self) -> CurveSpec:
        return CurveSpec.sampled(
            self.metric,
            self.s,
            self.points,
            derivative_table=self.derivative_table,
            unit_speed=True,
        )
