"""Tests for integrating prescribed curvatures into curves."""

import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings as hypothesis_settings
from hypothesis import strategies as st

from semibertrand.core.exceptions import InputError, StepSizeError
from semibertrand.dsl import evaluate
from semibertrand.models.curve import CurvaturePrescription
from semibertrand.models.metric import E1_2, E1_3, E2_4, PseudoFrame
from semibertrand.services.bertrand_service import condition_iv, estimate_13_constants, identity_residuals
from semibertrand.services.frenet_service import frenet_apparatus
from semibertrand.services.synthesis_service import integrate_frenet_system, synthesize, validate_prescription

SQRT3 = np.sqrt(3.0)


def _helix_prescription(interval=(0.0, 2.0)) -> CurvaturePrescription:
    frame = PseudoFrame(
        vectors=[[2.0, 0.0, SQRT3], [0.0, 1.0, 0.0], [SQRT3, 0.0, 2.0]],
        metric=E1_3,
        expected_signs=E1_3.frenet_signs,
    )
    return CurvaturePrescription(
        metric=E1_3, k1=2.0, k2=-SQRT3, interval=interval, initial_frame=frame, initial_point=[0.0, 2.0, 0.0]
    )


def _helix_points(s: np.ndarray) -> np.ndarray:
    return np.column_stack([2 * np.sinh(s), 2 * np.cosh(s), SQRT3 * s])


def test_trajectory_keeps_pseudo_orthonormal_frames(constant_131_trajectory):
    """Test that every frame along (1, 3, 1) keeps the Frenet Gram matrix."""
    traj = constant_131_trajectory
    assert len(traj.s) == 2001
    assert traj.step == pytest.approx(1e-3)
    assert traj.gram_residuals.max() < 1e-9
    assert np.allclose(traj.curvatures, [1.0, 3.0, 1.0])


def test_derivative_table_follows_frenet_equations(constant_131_trajectory):
    """Test c' = t and c'' = -k1 n1 in the exact derivative table."""
    traj = constant_131_trajectory
    assert np.array_equal(traj.derivative_table[:, 0], traj.points)
    assert np.allclose(traj.derivative_table[:, 1], traj.frames[:, 0])
    assert np.allclose(traj.derivative_table[:, 2], -traj.frames[:, 1])


def test_synthesized_helix_is_congruent_to_closed_form():
    """Test that k1 = 2, k2 = -sqrt(3) with matching data reproduces the helix."""
    curve = synthesize(_helix_prescription(), step=1e-3)
    assert curve.unit_speed
    assert np.max(np.abs(curve.points - _helix_points(curve.parameters))) < 1e-8


def test_step_halving_shows_fourth_order():
    """Test that halving the step cuts the endpoint error about sixteenfold."""
    errors = []
    for step in (0.04, 0.02):
        traj = integrate_frenet_system(_helix_prescription(), step=step)
        errors.append(np.abs(traj.points[-1] - _helix_points(traj.s[-1:])[0]).max())
    assert errors[1] < errors[0] / 8


def test_step_is_adjusted_to_divide_the_interval():
    """Test that the interval is covered by equal steps."""
    p = CurvaturePrescription(metric=E1_2, k1="1", interval=(0.0, 1.0))
    traj = integrate_frenet_system(p, step=0.3)
    assert len(traj.s) == 5
    assert traj.step == pytest.approx(0.25)
    assert traj.s[-1] == pytest.approx(1.0)


def test_invalid_prescription_is_refused():
    """Test k1 <= 0 and a k3 that changes sign."""
    p = CurvaturePrescription(metric=E2_4, k1="s - 1", k2="3", k3="1", interval=(0.0, 2.0))
    with pytest.raises(InputError) as exc_info:
        validate_prescription(p)
    assert exc_info.value.error_code == "INVALID_PRESCRIPTION"
    assert exc_info.value.details == {"curvature": "k1", "parameter": 0.0}

    p = CurvaturePrescription(metric=E2_4, k1="1", k2="3", k3="sin(s)", interval=(-1.0, 1.0))
    with pytest.raises(InputError) as exc_info:
        integrate_frenet_system(p)
    assert exc_info.value.details["curvature"] == "k3"


def test_wrong_curvature_count_is_refused():
    """Test that E2_4 needs three curvature functions."""
    with pytest.raises(InputError) as exc_info:
        CurvaturePrescription(metric=E2_4, k1="1", k2="3", interval=(0.0, 1.0))
    assert exc_info.value.error_code == "DIMENSION_MISMATCH"


def test_initial_frame_must_match_frenet_signs():
    """Test an orthonormal but wrongly signed starting frame."""
    frame = PseudoFrame(vectors=np.eye(4)[[2, 0, 1, 3]], metric=E2_4, expected_signs=E2_4.frenet_signs)
    p = CurvaturePrescription(metric=E2_4, k1=1.0, k2=3.0, k3=1.0, interval=(0.0, 1.0), initial_frame=frame)
    with pytest.raises(InputError) as exc_info:
        integrate_frenet_system(p)
    assert exc_info.value.error_code == "INVALID_FRAME"


def test_drift_beyond_limit_asks_for_smaller_step(constant_131_prescription):
    """Test that a drift check failure suggests half the step."""
    with pytest.raises(StepSizeError) as exc_info:
        integrate_frenet_system(constant_131_prescription, step=0.1, drift_limit=1e-30)
    assert exc_info.value.details["step"] == pytest.approx(0.1)
    assert "0.05" in exc_info.value.message


def test_nonpositive_step_is_refused(constant_131_prescription):
    """Test that the step must be positive."""
    with pytest.raises(InputError) as exc_info:
        integrate_frenet_system(constant_131_prescription, step=0.0)
    assert exc_info.value.error_code == "INVALID_STEP"


def _bertrand_prescription(alpha, gamma, delta, mu, amplitude, omega):
    """Curvatures satisfying relations ii and iii, with their constant and sin(omega s) parts."""
    g2 = gamma**2 - 1.0
    k1 = (1.0, amplitude)
    k3 = ((1.0 - alpha * g2) / mu, -alpha * g2 * amplitude / mu)
    k2 = (delta * k3[0] + gamma * k1[0], delta * k3[1] + gamma * k1[1])
    if amplitude == 0.0:
        return k1[0], k2[0], k3[0]
    return tuple(f"{c0!r} + {c1!r}*sin({omega!r}*s)" for c0, c1 in (k1, k2, k3))


@hypothesis_settings(
    max_examples=25, deadline=None, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow]
)
@given(
    alpha=st.floats(0.2, 1.0),
    gamma=st.floats(1.2, 3.0),
    delta=st.floats(1.2, 3.0),
    mu=st.floats(0.5, 2.0),
    amplitude=st.one_of(st.just(0.0), st.floats(0.1, 0.3)),
    omega=st.floats(1.0, 2.0),
)
def test_bertrand_prescriptions_survive_synthesis(alpha, gamma, delta, mu, amplitude, omega):
    """Test synthesize then frenet_apparatus on constant and near-constant (1,3)-Bertrand curvatures."""
    k1, k2, k3 = _bertrand_prescription(alpha, gamma, delta, mu, amplitude, omega)
    p = CurvaturePrescription(metric=E2_4, k1=k1, k2=k2, k3=k3, interval=(0.0, 1.0))
    s = np.linspace(0.0, 1.0, 201)
    prescribed = np.stack([np.broadcast_to(evaluate(e, s), s.shape) for e in p.curvature_exprs])
    assume(prescribed[1].min() >= 0.2 and prescribed[1].max() <= 5.0)
    assume(np.abs(prescribed[2]).min() >= 0.2 and np.abs(prescribed[2]).max() <= 5.0)
    assume(np.all(np.sign(prescribed[2]) == np.sign(prescribed[2][0])))
    assume(np.abs(condition_iv(*prescribed, gamma)).min() >= 0.1)

    app = frenet_apparatus(synthesize(p, step=1e-3), grid_size=101)
    grid = app.parameters
    expected = np.stack([np.broadcast_to(evaluate(e, grid), grid.shape) for e in p.curvature_exprs], axis=1)
    assert np.max(np.abs(app.curvatures() - expected)) < 1e-5

    hints = {"gamma_hint": gamma, "alpha_hint": alpha} if amplitude == 0.0 else {}
    cert = estimate_13_constants(app, tol_eq=1e-6, **hints)
    assert cert.accepted, cert.reason
    assert cert.gamma == pytest.approx(gamma, abs=1e-5)
    assert cert.delta == pytest.approx(delta, abs=1e-5)
    assert cert.beta == pytest.approx(alpha * delta - mu / gamma, abs=1e-4)
    assert identity_residuals(app, cert).speed_identity < 1e-4
