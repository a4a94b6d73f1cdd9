"""Records produced by the Bertrand checks."""
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from semibertrand.models.base import BaseModel
from semibertrand.models.curve import CurveSpec


def _readonly(v):
    if v is None:
        return None
    out = np.array(v, dtype=float)
    out.setflags(write=False)
    return out


class BertrandCertificate(BaseModel):
    """Constants and per-condition diagnostics of a (1,3)-Bertrand test.

    ``residual_ii`` and ``residual_iii`` are the largest violations of the two
    equalities; ``residual_i`` and ``residual_iv`` are the smallest magnitudes
    of the two quantities that must stay away from zero.
    """

    alpha: Optional[float] = None
    beta: Optional[float] = None
    gamma: Optional[float] = None
    delta: Optional[float] = None
    residual_i: Optional[float] = None
    residual_ii: Optional[float] = None
    residual_iii: Optional[float] = None
    residual_iv: Optional[float] = None
    condition_iv_extreme: Optional[float] = Field(default=None, description="Signed value where |iv| is smallest")
    epsilon: int = Field(default=0, description="sign(alpha k2 - beta k3); 0 when undefined")
    family_flag: bool = Field(default=False, description="Constants are not unique")
    accepted: bool = False
    failed_condition: Optional[str] = None
    reason: Optional[str] = None

    def report(self) -> Dict[str, object]:
        return self.model_dump()


class DerivationTrace(BaseModel):
    """Intermediate scalar functions of the mate construction.

    A and B are the t and n2 components of phi' kbar2 nbar2 (scaled by
    phi'^2 kbar1) as they come out of the Frenet equations, before relation ii
    is used. P and Q are the t and n2 components of dnbar1/dsbar - kbar1 tbar
    over the common denominator R. The residuals compare them with the reduced
    forms A = w P / (gamma^2 - 1), B = gamma A, Q = gamma P and P = condition iv,
    relative to the size of the reduced form.
    """

    A: np.ndarray
    B: np.ndarray
    P: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    residual_a: float = 0.0
    residual_b: float = 0.0
    residual_p: float = 0.0
    residual_q: float = 0.0

    def max_residual(self) -> float:
        return max(self.residual_a, self.residual_b, self.residual_p, self.residual_q)

    @field_validator("A", "B", "P", "Q", "R", mode="before")
    @classmethod
    def as_array(cls, v):
        return _readonly(v)


class HyperbolicPair(BaseModel):
    """Components (c, sigma) of a boost with c^2 - sigma^2 = 1."""

    c: float
    sigma: float

    @model_validator(mode="after")
    def on_hyperbola(self) -> "HyperbolicPair":
        if abs(self.c * self.c - self.sigma * self.sigma - 1.0) > 1e-9 * max(1.0, self.c * self.c):
            raise ValueError("components must satisfy c^2 - sigma^2 = 1")
        return self

    def as_tuple(self) -> Tuple[float, float]:
        return self.c, self.sigma


class HyperbolicAngles(BaseModel):
    """Boost components appearing in the classical and (1,3) constructions."""

    theta: Optional[HyperbolicPair] = Field(default=None, description="Classical mate tangent against (t, n2)")
    tau: Optional[HyperbolicPair] = Field(default=None, description="Mate tangent against (t, n2)")
    eta: Optional[HyperbolicPair] = Field(default=None, description="Mate n1 from the tangent derivative")
    xi: Optional[HyperbolicPair] = Field(default=None, description="Mate n1 against (n1, n3)")


class MateApparatus(BaseModel):
    """Closed-form apparatus of the (1,3) mate, indexed by the curve's arc length."""

    s: np.ndarray
    phi_prime: np.ndarray
    kbar1: np.ndarray
    kbar2: np.ndarray
    kbar3: np.ndarray
    rot_c: np.ndarray
    rot_s: np.ndarray
    epsilon: int
    trace: DerivationTrace
    angles: Optional[HyperbolicAngles] = None

    @field_validator("s", "phi_prime", "kbar1", "kbar2", "kbar3", "rot_c", "rot_s", mode="before")
    @classmethod
    def as_array(cls, v):
        return _readonly(v)


class IdentityResiduals(BaseModel):
    """Pointwise identities every certified curve satisfies."""

    speed_identity: float = Field(description="max |(1 + a k1)^2 - W^2 - (gamma^2 - 1) W^2|")
    relation_iii_derivative: float = Field(
        description="max |(gamma k1' - k2') k3 - (gamma k1 - k2) k3'| at interior samples"
    )


class ClassicalFit(BaseModel):
    """Constants of a k1 + b k2 = 1 for a curve in E1_3."""

    a: float
    b: float
    residual: float
    family_flag: bool = False


class OffsetMate(BaseModel):
    """Offset curve c + alpha n1 together with its normal-line check."""

    alpha: float
    curve: CurveSpec
    residual: float = Field(description="Largest distance between unit normals up to sign")
    min_speed: float


class ObstructionEntry(BaseModel):
    alpha: float
    value: float = Field(description="min over s of |k3 sinh theta|")
    feasible: bool = Field(description="The offset tangent is timelike everywhere")
    theta: Optional[HyperbolicPair] = None


class ObstructionScan(BaseModel):
    entries: List[ObstructionEntry]

    def __len__(self) -> int:
        return len(self.entries)

    def min_nonzero_alpha_value(self) -> float:
        values = [e.value for e in self.entries if e.alpha != 0.0]
        return float(min(values)) if values else float("inf")


class VerificationReport(BaseModel):
    """Numeric mate apparatus compared with the closed forms; keys are stable."""

    plane_residual: float
    kbar1_dev: float
    kbar2_dev: float
    kbar3_dev: float
    rot_constancy: float
    tangent_dev: float
    n1bar_dev: float
    n2bar_dev: float
    phi_dev: float

    def report(self) -> Dict[str, float]:
        return self.model_dump()
