"""Model exports."""
from semibertrand.models.base import BaseModel
from semibertrand.models.metric import E1_2, E1_3, E2_4, CausalCharacter, PseudoFrame, SemiMetric
from semibertrand.models.curve import (
    CausalProfile,
    CurvaturePrescription,
    CurveSpec,
    FrenetApparatus,
    FrenetTrajectory,
)
from semibertrand.models.bertrand import (
    BertrandCertificate,
    ClassicalFit,
    DerivationTrace,
    HyperbolicAngles,
    HyperbolicPair,
    IdentityResiduals,
    MateApparatus,
    ObstructionEntry,
    ObstructionScan,
    OffsetMate,
    VerificationReport,
)

__all__ = [
    "BaseModel",
    "E1_2",
    "E1_3",
    "E2_4",
    "CausalCharacter",
    "PseudoFrame",
    "SemiMetric",
    "CausalProfile",
    "CurvaturePrescription",
    "CurveSpec",
    "FrenetApparatus",
    "FrenetTrajectory",
    "BertrandCertificate",
    "ClassicalFit",
    "DerivationTrace",
    "HyperbolicAngles",
    "HyperbolicPair",
    "IdentityResiduals",
    "MateApparatus",
    "ObstructionEntry",
    "ObstructionScan",
    "OffsetMate",
    "VerificationReport",
]
