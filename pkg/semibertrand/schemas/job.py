"""Job configuration accepted by the command-line front-end."""
from enum import Enum
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from semibertrand.core.config import settings


class Command(str, Enum):
    """Pipelines the CLI can run."""

    CLASSIFY = "classify"
    FRENET = "frenet"
    SYNTH = "synth"
    FIT_CLASSICAL = "fit-classical"
    SCAN_CLASSICAL = "scan-classical"
    BERTRAND_CHECK = "bertrand-check"
    BERTRAND_MATE = "bertrand-mate"
    BERTRAND_VERIFY = "bertrand-verify"

    @property
    def stem(self) -> str:
        """File stem used for this command's reports."""
        return self.value.replace("-", "_")


class JobConfig(BaseModel):
    """One CLI invocation: command, files and numeric overrides."""

    model_config = ConfigDict(frozen=True)

    command: Command
    input_path: Path = Field(description="Curve or prescription file (TOML)")
    output_path: Path = Field(default=Path("reports"), description="Directory receiving the reports")
    grid: int = Field(default=settings.GRID_SIZE, ge=16, description="Arc-length samples per apparatus")
    step: float = Field(default=settings.SYNTH_STEP, gt=0, description="Synthesis and node spacing")
    tol_eq: float = Field(default=settings.TOL_EQ, gt=0, description="Tolerance of relations ii and iii")
    tol_margin: float = Field(default=settings.TOL_MARGIN, gt=0, description="Margin of conditions i and iv")
    gamma_hint: Optional[float] = Field(default=None, description="Picks gamma for constant-curvature curves")
    alpha_hint: Optional[float] = Field(default=None, description="Picks alpha for constant-curvature curves")

