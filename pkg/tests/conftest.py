"""Test configuration and fixtures."""

from pathlib import Path

import numpy as np
import pytest

from semibertrand.models.curve import CurvaturePrescription, CurveSpec
from semibertrand.models.metric import E1_2, E1_3, E2_4
from semibertrand.services.bertrand_service import estimate_13_constants
from semibertrand.services.frenet_service import frenet_apparatus
from semibertrand.services.synthesis_service import integrate_frenet_system

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"

# Non-constant (1,3)-Bertrand curvatures with alpha = 1, beta = 5/3, gamma = delta = 3/2
SINUSOIDAL_CURVATURES = ("1 + 0.2*sin(s)", "3 + 1.8*sin(s)", "1 + sin(s)")


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    """Directory holding the sample input files."""
    return FIXTURE_DIR


@pytest.fixture(scope="session")
def helix_curve() -> CurveSpec:
    """Unit-speed timelike helix in E1_3 with k1 = 2, k2 = -sqrt(3)."""
    return CurveSpec.analytic(E1_3, ["2*sinh(s)", "2*cosh(s)", "sqrt(3)*s"], (0.0, 2.0))


@pytest.fixture(scope="session")
def planar_curve() -> CurveSpec:
    """Unit-speed timelike plane curve with k1 = 1."""
    return CurveSpec.analytic(E1_2, ["sinh(s)", "cosh(s)"], (0.0, 2.0))


@pytest.fixture(scope="session")
def constant_131_prescription() -> CurvaturePrescription:
    return CurvaturePrescription(metric=E2_4, k1=1.0, k2=3.0, k3=1.0, interval=(0.0, 2.0))


@pytest.fixture(scope="session")
def constant_131_trajectory(constant_131_prescription):
    """Frenet system of (1, 3, 1) integrated on [0, 2] with step 1e-3."""
    return integrate_frenet_system(constant_131_prescription, step=1e-3)


@pytest.fixture(scope="session")
def constant_131_curve(constant_131_trajectory) -> CurveSpec:
    return constant_131_trajectory.to_curve()


@pytest.fixture(scope="session")
def constant_131_apparatus(constant_131_curve):
    return frenet_apparatus(constant_131_curve, grid_size=401)


@pytest.fixture(scope="session")
def constant_131_certificate(constant_131_apparatus):
    """Certificate of the (1, 3, 1) curve for the family member gamma = 1.5."""
    return estimate_13_constants(constant_131_apparatus, gamma_hint=1.5)


@pytest.fixture(scope="session")
def sinusoidal_curve() -> CurveSpec:
    k1, k2, k3 = SINUSOIDAL_CURVATURES
    p = CurvaturePrescription(metric=E2_4, k1=k1, k2=k2, k3=k3, interval=(0.0, 2.0))
    return integrate_frenet_system(p, step=1e-3).to_curve()


@pytest.fixture(scope="session")
def sinusoidal_apparatus(sinusoidal_curve):
    return frenet_apparatus(sinusoidal_curve, grid_size=401)


@pytest.fixture(scope="session")
def sinusoidal_certificate(sinusoidal_apparatus):
    return estimate_13_constants(sinusoidal_apparatus)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)
