"""Metric, causal character and pseudo-orthonormal frame records."""

from enum import Enum
from typing import Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from semibertrand.models.base import BaseModel


class CausalCharacter(str, Enum):
    """Causal character of a vector under an indefinite metric."""

    TIMELIKE = "timelike"
    SPACELIKE = "spacelike"
    NULL = "null"


class SemiMetric(BaseModel):
    """Flat semi-Euclidean metric with the first ``index`` axes negative."""

    dimension: int = Field(gt=0, description="Number of coordinates")
    index: int = Field(ge=0, description="Number of negative-signature axes")

    @model_validator(mode="after")
    def check_index(self) -> "SemiMetric":
        if self.index > self.dimension:
            raise ValueError("index cannot exceed dimension")
        return self

    @property
    def signature(self) -> np.ndarray:
        return np.concatenate([-np.ones(self.index), np.ones(self.dimension - self.index)])

    @property
    def tag(self) -> str:
        return f"E{self.index}_{self.dimension}"

    @property
    def frenet_signs(self) -> Tuple[int, ...]:
        """Causal signs of (t, n1, n2, n3) for a timelike curve, truncated to the dimension."""
        if self.index == 2 and self.dimension == 4:
            return (-1, -1, 1, 1)
        return (-1,) + (1,) * (self.dimension - 1)

    def __str__(self) -> str:
        return self.tag


E1_2 = SemiMetric(dimension=2, index=1)
E1_3 = SemiMetric(dimension=3, index=1)
E2_4 = SemiMetric(dimension=4, index=2)


class PseudoFrame(BaseModel):
    """Ordered pseudo-orthonormal vectors with their recorded causal signs."""

    vectors: np.ndarray = Field(description="Rows are the frame vectors")
    metric: SemiMetric
    expected_signs: Tuple[int, ...] = Field(description="g(e_i, e_i) for each row")
    orientation_flipped: bool = Field(
        default=False, description="Whether the last vector was flipped to make det = +1"
    )

    @field_validator("vectors", mode="before")
    @classmethod
    def as_matrix(cls, v) -> np.ndarray:
        arr = np.array(v, dtype=float)
        if arr.ndim != 2:
            raise ValueError("frame vectors must form a 2-d array")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def check_shape(self) -> "PseudoFrame":
        rows, cols = self.vectors.shape
        if cols != self.metric.dimension:
            raise ValueError("frame vectors do not match the metric dimension")
        if rows != len(self.expected_signs) or rows > cols:
            raise ValueError("one sign per frame vector, at most dimension vectors")
        return self

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def __getitem__(self, i: int) -> np.ndarray:
        return self.vectors[i]

    @property
    def is_complete(self) -> bool:
        return len(self) == self.metric.dimension

    def gram(self) -> np.ndarray:
        return (self.vectors * self.metric.signature) @ self.vectors.T

    def gram_residual(self) -> float:
        """Largest deviation of the Gram matrix from diag(expected_signs)."""
        return float(np.max(np.abs(self.gram() - np.diag(self.expected_signs))))

    def determinant(self) -> float:
        if not self.is_complete:
            raise ValueError("determinant needs a complete frame")
        return float(np.linalg.det(self.vectors))
