"""Shared names: space tags, report columns and verification keys."""
from typing import Dict, List

from semibertrand.models.metric import E1_2, E1_3, E2_4, SemiMetric

SPACES: Dict[str, SemiMetric] = {"E1_2": E1_2, "E1_3": E1_3, "E2_4": E2_4}

FRAME_NAMES = ("t", "n1", "n2", "n3")
CURVATURE_NAMES = ("k1", "k2", "k3")

VERIFICATION_KEYS = (
    "plane_residual",
    "kbar1_dev",
    "kbar2_dev",
    "kbar3_dev",
    "rot_constancy",
    "tangent_dev",
    "n1bar_dev",
    "n2bar_dev",
    "phi_dev",
)


def apparatus_columns(dimension: int) -> List[str]:
    """CSV header for an apparatus table: s, frame coordinates, curvatures."""
    columns = ["s"]
    for name in FRAME_NAMES[:dimension]:
        columns.extend(f"{name}_{i}" for i in range(dimension))
    columns.extend(CURVATURE_NAMES[: dimension - 1])
    return columns
