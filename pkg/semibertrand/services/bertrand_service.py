"""(1,3)-Bertrand curves in E2_4: constants, mate construction and verification.

A curve qualifies when constants alpha, beta, gamma, delta exist with
  (i)   alpha k2 - beta k3 != 0
  (ii)  gamma (alpha k2 - beta k3) - alpha k1 = 1
  (iii) delta k3 = -gamma k1 + k2
  (iv)  (gamma^2 + 1) k1 k2 - gamma (k1^2 + k2^2 - k3^2) != 0
with |gamma| > 1 and |delta| > 1. Its mate is c + alpha n1 + beta n3.
"""
import logging
from typing import Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import subspace_angles

from semibertrand.core.config import settings
from semibertrand.core.exceptions import CertificateInconsistencyError, InputError, MissingHintError
from semibertrand.geometry.pseudo_linalg import inner
from semibertrand.models.bertrand import (
    BertrandCertificate,
    DerivationTrace,
    HyperbolicAngles,
    HyperbolicPair,
    IdentityResiduals,
    MateApparatus,
    VerificationReport,
)
from semibertrand.models.curve import CurveSpec, FrenetApparatus
from semibertrand.models.metric import E2_4
from semibertrand.services.classical_service import obstruction_entry
from semibertrand.services.frenet_service import frenet_apparatus, node_apparatus, parameter_derivatives
from semibertrand.utils.finite_differences import five_point_derivative, uniform_spacing

logger = logging.getLogger(__name__)


def _require_e24(app_or_curve) -> None:
    if app_or_curve.metric != E2_4:
        raise InputError(
            f"(1,3)-Bertrand curves live in E2_4, got {app_or_curve.metric.tag}", error_code="UNSUPPORTED_SPACE"
        )


def _rms(x: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.square(x))))


def _is_rank_deficient(design: np.ndarray, ratio: float) -> bool:
    sv = np.linalg.svd(design / np.linalg.norm(design, axis=0), compute_uv=False)
    return bool(sv[-1] <= ratio * sv[0])


def condition_iv(k1: np.ndarray, k2: np.ndarray, k3: np.ndarray, gamma: float) -> np.ndarray:
    return (gamma**2 + 1.0) * k1 * k2 - gamma * (k1**2 + k2**2 - k3**2)


def _reject(cert: dict, condition: str, reason: str) -> BertrandCertificate:
    logger.info(f"not a (1,3)-Bertrand curve: condition {condition} fails ({reason})")
    return BertrandCertificate(**cert, accepted=False, failed_condition=condition, reason=reason)


def estimate_13_constants(
    app: FrenetApparatus,
    gamma_hint: Optional[float] = None,
    alpha_hint: Optional[float] = None,
    tol_eq: Optional[float] = None,
    tol_margin: Optional[float] = None,
) -> BertrandCertificate:
    """Fit the constants by regression over the grid and validate every condition.

    Relation iii gives (gamma, delta), then relation ii gives (alpha, beta).
    When a regression is rank deficient (constant curvature ratios) the
    constants form a family: gamma comes from ``gamma_hint`` and alpha from
    ``alpha_hint`` (default FAMILY_ALPHA). Failed conditions are returned as
    an unaccepted certificate.
    """
    _require_e24(app)
    tol_eq = settings.TOL_EQ if tol_eq is None else tol_eq
    tol_margin = settings.TOL_MARGIN if tol_margin is None else tol_margin
    k1, k2, k3 = app.k1, app.k2, app.k3
    cert: dict = {}

    design = np.column_stack([k3, k1])
    family = _is_rank_deficient(design, settings.RANK_RATIO)
    if family:
        # a rank-one design still has to reproduce k2 before a hint can pick a member
        delta, gamma = (float(x) for x in np.linalg.lstsq(design, k2, rcond=settings.RANK_RATIO)[0])
        spread = float(np.max(np.abs(design @ np.array([delta, gamma]) - k2)))
        if spread > tol_eq * max(1.0, _rms(k2)):
            cert.update(gamma=gamma, delta=delta, family_flag=True, residual_iii=spread)
            return _reject(cert, "iii", f"relation iii residual {spread:.3e}")
        if gamma_hint is None:
            raise MissingHintError("gamma_hint")
        gamma = float(gamma_hint)
        delta = float(np.linalg.lstsq(k3[:, None], k2 - gamma * k1, rcond=None)[0][0])
    else:
        if gamma_hint is not None:
            logger.warning("curvature ratios are not constant; ignoring gamma_hint")
        delta, gamma = (float(x) for x in np.linalg.lstsq(design, k2, rcond=None)[0])
    cert.update(gamma=gamma, delta=delta, family_flag=family)
    residual_iii = float(np.max(np.abs(delta * k3 + gamma * k1 - k2)))
    cert["residual_iii"] = residual_iii
    if residual_iii > tol_eq * max(1.0, _rms(k2)):
        return _reject(cert, "iii", f"relation iii residual {residual_iii:.3e}")
    if abs(gamma) <= 1.0 + tol_margin:
        return _reject(cert, "gamma_range", f"|gamma| = {abs(gamma):.10g} is not above 1")
    if abs(delta) <= 1.0 + tol_margin:
        return _reject(cert, "delta_range", f"|delta| = {abs(delta):.10g} is not above 1")

    design = np.column_stack([gamma * k2 - k1, -gamma * k3])
    if _is_rank_deficient(design, settings.RANK_RATIO):
        cert["family_flag"] = True
        alpha = settings.FAMILY_ALPHA if alpha_hint is None else float(alpha_hint)
        beta = float(np.linalg.lstsq(design[:, 1:], 1.0 - alpha * design[:, 0], rcond=None)[0][0])
    else:
        if alpha_hint is not None:
            logger.warning("offset constants are unique; ignoring alpha_hint")
        alpha, beta = (float(x) for x in np.linalg.lstsq(design, np.ones(len(k1)), rcond=None)[0])
    cert.update(alpha=alpha, beta=beta)

    w = alpha * k2 - beta * k3
    residual_ii = float(np.max(np.abs(gamma * w - alpha * k1 - 1.0)))
    cert["residual_ii"] = residual_ii
    if residual_ii > tol_eq:
        return _reject(cert, "ii", f"relation ii residual {residual_ii:.3e}")

    cert["residual_i"] = float(np.min(np.abs(w)))
    signs = np.sign(w)
    if np.any(signs != signs[0]) or cert["residual_i"] <= tol_margin * _rms(w):
        return _reject(cert, "i", "alpha k2 - beta k3 vanishes or changes sign")
    cert["epsilon"] = int(signs[0])

    p = condition_iv(k1, k2, k3, gamma)
    i = int(np.argmin(np.abs(p)))
    cert.update(residual_iv=float(abs(p[i])), condition_iv_extreme=float(p[i]))
    if np.any(np.sign(p) != np.sign(p[0])) or abs(p[i]) <= tol_margin * _rms(p):
        return _reject(cert, "iv", "condition iv vanishes on the grid")

    root = (gamma * k1 - k2) ** 2 - k3**2
    if root.min() <= tol_margin * _rms(root):
        return _reject(cert, "root", "(gamma k1 - k2)^2 - k3^2 is not positive")

    logger.info(
        f"(1,3)-Bertrand certificate: alpha={alpha:.10g} beta={beta:.10g} gamma={gamma:.10g} delta={delta:.10g}"
    )
    return BertrandCertificate(**cert, accepted=True)


def _require_accepted(cert: BertrandCertificate) -> None:
    if not cert.accepted:
        raise CertificateInconsistencyError(
            "certificate was not accepted; the mate is undefined", failed_condition=cert.failed_condition
        )


def _phi_prime(app: FrenetApparatus, cert: BertrandCertificate) -> Tuple[np.ndarray, np.ndarray, int]:
    w = cert.alpha * app.k2 - cert.beta * app.k3
    eps = int(np.sign(w[0]))
    if eps == 0 or np.any(np.sign(w) != eps):
        raise CertificateInconsistencyError("alpha k2 - beta k3 vanishes on the curve")
    phi_prime = eps * np.sqrt(cert.gamma**2 - 1.0) * w
    return w, phi_prime, eps


def construct_mate(
    c: CurveSpec,
    cert: BertrandCertificate,
    step: Optional[float] = None,
    app: Optional[FrenetApparatus] = None,
) -> CurveSpec:
    """Sampled mate c + alpha n1 + beta n3, parametrized by the arc length of ``c``."""
    _require_e24(c)
    _require_accepted(cert)
    if cert.alpha == 0.0 and cert.beta == 0.0:
        raise CertificateInconsistencyError("zero offset: the mate would coincide with the curve")
    app = node_apparatus(c, step) if app is None else app
    _, phi_prime, _ = _phi_prime(app, cert)
    if phi_prime.min() <= settings.MATE_SPEED_TOL:
        raise CertificateInconsistencyError(
            "mate is singular although condition i holds", min_phi_prime=float(phi_prime.min())
        )
    base = parameter_derivatives(c, app.parameters, max_order=0)[:, 0]
    points = base + cert.alpha * app.n1 + cert.beta * app.n3
    logger.info(f"constructed (1,3) mate on {len(app)} samples, phi' in [{phi_prime.min():.6g}, {phi_prime.max():.6g}]")
    return CurveSpec.sampled(E2_4, app.s, points)


def _relative_gap(value: np.ndarray, reduced: np.ndarray) -> float:
    return float(np.max(np.abs(value - reduced)) / max(1.0, float(np.max(np.abs(reduced)))))


def _derivation_trace(
    k1: np.ndarray,
    k2: np.ndarray,
    k3: np.ndarray,
    cert: BertrandCertificate,
    w: np.ndarray,
    speed_curvature_sq: np.ndarray,
    r: np.ndarray,
) -> DerivationTrace:
    """Trace scalars in unreduced form, with their gaps to the reduced forms.

    ``speed_curvature_sq`` is (phi' kbar1)^2. A and B only reduce to
    w P / (gamma^2 - 1) and gamma A when relation ii holds.
    """
    gamma, alpha = cert.gamma, cert.alpha
    g2 = gamma**2 - 1.0
    gk = gamma * k1 - k2
    root = gk**2 - k3**2
    a = -speed_curvature_sq * (1.0 + alpha * k1) + k1 * w * gk
    b = -speed_curvature_sq * w + w * gk * k2 + w * k3**2
    p = g2 * k1 * gk - gamma * root
    q = g2 * (gk * k2 + k3**2) - root
    iv = condition_iv(k1, k2, k3, gamma)
    return DerivationTrace(
        A=a,
        B=b,
        P=p,
        Q=q,
        R=r,
        residual_a=_relative_gap(a, w * iv / g2),
        residual_b=_relative_gap(b, gamma * a),
        residual_p=_relative_gap(p, iv),
        residual_q=_relative_gap(q, gamma * p),
    )


def mate_apparatus_closed_form(app: FrenetApparatus, cert: BertrandCertificate) -> MateApparatus:
    """Mate speed, curvatures, frame rotation and trace scalars from the curve's apparatus."""
    _require_e24(app)
    _require_accepted(cert)
    k1, k2, k3 = app.k1, app.k2, app.k3
    gamma, alpha = cert.gamma, cert.alpha
    w, phi_prime, eps = _phi_prime(app, cert)
    g2 = gamma**2 - 1.0
    root = (gamma * k1 - k2) ** 2 - k3**2
    if root.min() <= 0:
        raise CertificateInconsistencyError(
            "(gamma k1 - k2)^2 - k3^2 is not positive", min_value=float(root.min())
        )
    sqrt_root = np.sqrt(root)
    p = condition_iv(k1, k2, k3, gamma)

    kbar1 = np.sqrt(root / g2) / phi_prime
    kbar2 = np.abs(p) / (phi_prime * np.sqrt(g2 * root))
    kbar3 = np.sqrt(g2) * k1 * k3 / (phi_prime * sqrt_root)
    rot_c = (gamma * k1 - k2) / (eps * sqrt_root)
    rot_s = -k3 / (eps * sqrt_root)

    trace = _derivation_trace(k1, k2, k3, cert, w, (phi_prime * kbar1) ** 2, eps * phi_prime * g2 * sqrt_root)
    if trace.max_residual() > settings.TOL_EQ:
        logger.warning(f"derivation trace departs from its reduced form by {trace.max_residual():.3e}")
    if np.any(trace.R == 0):
        raise CertificateInconsistencyError("trace scalar R vanishes")
    return MateApparatus(
        s=app.s,
        phi_prime=phi_prime,
        kbar1=kbar1,
        kbar2=kbar2,
        kbar3=kbar3,
        rot_c=rot_c,
        rot_s=rot_s,
        epsilon=eps,
        trace=trace,
        angles=hyperbolic_angles(app, cert),
    )


def _pair(c: np.ndarray, sigma: np.ndarray) -> HyperbolicPair:
    c, sigma = float(np.mean(c)), float(np.mean(sigma))
    scale = np.sqrt(c * c - sigma * sigma)
    return HyperbolicPair(c=c / scale, sigma=sigma / scale)


def hyperbolic_angles(app: FrenetApparatus, cert: BertrandCertificate) -> HyperbolicAngles:
    """Boost components of the construction, averaged over the grid (they are constant)."""
    _require_accepted(cert)
    k1, k2, k3 = app.k1, app.k2, app.k3
    gamma, alpha = cert.gamma, cert.alpha
    w, phi_prime, eps = _phi_prime(app, cert)
    root = (gamma * k1 - k2) ** 2 - k3**2
    sqrt_root = np.sqrt(root)
    kbar1 = np.sqrt(root / (gamma**2 - 1.0)) / phi_prime
    scale = kbar1 * phi_prime**2
    theta = obstruction_entry(k1, k2, k3, alpha).theta if alpha != 0.0 else None
    return HyperbolicAngles(
        theta=theta,
        tau=_pair((1.0 + alpha * k1) / phi_prime, w / phi_prime),
        eta=_pair(w * (gamma * k1 - k2) / scale, -w * k3 / scale),
        xi=_pair((gamma * k1 - k2) / (eps * sqrt_root), -k3 / (eps * sqrt_root)),
    )


def identity_residuals(app: FrenetApparatus, cert: BertrandCertificate) -> IdentityResiduals:
    """Speed identity of the mate and the derivative of relation iii."""
    _require_accepted(cert)
    k1, k2, k3 = app.k1, app.k2, app.k3
    gamma, alpha = cert.gamma, cert.alpha
    w = alpha * k2 - cert.beta * k3
    tangent_sq = (1.0 + alpha * k1) ** 2 - w**2
    speed_identity = float(np.max(np.abs(tangent_sq - (gamma**2 - 1.0) * w**2)))
    h = uniform_spacing(app.s)
    lhs = five_point_derivative(gamma * k1 - k2, h) * k3[2:-2]
    rhs = (gamma * k1 - k2)[2:-2] * five_point_derivative(k3, h)
    return IdentityResiduals(speed_identity=speed_identity, relation_iii_derivative=float(np.max(np.abs(lhs - rhs))))


def plane_residual(app: FrenetApparatus, mate_app: FrenetApparatus) -> float:
    """Largest principal angle between span{n1bar, n3bar} and span{n1, n3}.

    Both planes are expressed in the curve's own frame coordinates, where
    span{n1, n3} is a coordinate plane.
    """
    eps = np.array(app.metric.frenet_signs, dtype=float)
    target = np.eye(4)[:, [1, 3]]
    worst = 0.0
    for frame, mate_frame in zip(app.frames, mate_app.frames):
        coords = eps[:, None] * ((frame * app.metric.signature) @ mate_frame[[1, 3]].T)
        worst = max(worst, float(np.max(subspace_angles(coords, target))))
    return worst


def verify_mate(
    c: CurveSpec,
    mate: CurveSpec,
    cert: BertrandCertificate,
    grid_size: Optional[int] = None,
) -> VerificationReport:
    """Recompute the mate's apparatus numerically and compare with the closed forms.

    ``mate`` is parametrized by the arc length of ``c`` (as built by
    :func:`construct_mate`), which fixes the correspondence between samples.
    """
    _require_e24(c)
    _require_e24(mate)
    mate_app = frenet_apparatus(mate, grid_size=grid_size)
    app = frenet_apparatus(c, grid=mate_app.parameters)
    closed = mate_apparatus_closed_form(app, cert)
    gamma = cert.gamma
    g = np.sqrt(gamma**2 - 1.0)
    eps = closed.epsilon
    p_sign = np.sign(eps * closed.trace.P)[:, None]

    tangent = eps * (gamma * app.t + app.n2) / g
    n1bar = closed.rot_c[:, None] * app.n1 + closed.rot_s[:, None] * app.n3
    n2bar = p_sign * (app.t + gamma * app.n2) / g

    rot_c_num = -inner(mate_app.n1, app.n1, E2_4)
    rot_s_num = inner(mate_app.n1, app.n3, E2_4)

    phi = CubicSpline(app.s, closed.phi_prime).antiderivative()(app.s)
    sbar = mate_app.s - mate_app.s[0]

    report = VerificationReport(
        plane_residual=plane_residual(app, mate_app),
        kbar1_dev=float(np.max(np.abs(mate_app.k1 - closed.kbar1))),
        kbar2_dev=float(np.max(np.abs(mate_app.k2 - closed.kbar2))),
        kbar3_dev=float(np.max(np.abs(mate_app.k3 - closed.kbar3))),
        rot_constancy=float(max(np.std(rot_c_num), np.std(rot_s_num))),
        tangent_dev=float(np.max(np.abs(mate_app.t - tangent))),
        n1bar_dev=float(np.max(np.abs(mate_app.n1 - n1bar))),
        n2bar_dev=float(np.max(np.abs(mate_app.n2 - n2bar))),
        phi_dev=float(np.max(np.abs((phi - phi[0]) - sbar))),
    )
    logger.info(f"mate verification: plane residual {report.plane_residual:.3e}")
    return report
