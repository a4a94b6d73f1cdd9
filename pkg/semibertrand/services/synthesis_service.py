"""Curves realizing prescribed curvatures, by integrating the Frenet system."""
import logging
from typing import Optional

import numpy as np

from semibertrand.core.config import settings
from semibertrand.core.exceptions import InputError, StepSizeError
from semibertrand.dsl.jets import Jet4, eval_jet, evaluate
from semibertrand.geometry.pseudo_linalg import indefinite_gram_schmidt
from semibertrand.models.curve import CurvaturePrescription, CurveSpec, FrenetTrajectory
from semibertrand.services.frenet_service import frenet_matrix, frenet_pattern, require_supported

logger = logging.getLogger(__name__)


def _gram_residual(frame: np.ndarray, signature: np.ndarray, signs: np.ndarray) -> float:
    gram = (frame * signature) @ frame.T
    return float(np.max(np.abs(gram - np.diag(signs))))


def validate_prescription(p: CurvaturePrescription, points: Optional[int] = None) -> None:
    """k1 > 0 and the other curvatures nonzero on a dense grid of the interval."""
    n = settings.TIMELIKE_CHECK_POINTS if points is None else points
    s = np.linspace(p.interval[0], p.interval[1], n)
    for index, expr in enumerate(p.curvature_exprs):
        values = np.broadcast_to(evaluate(expr, s), s.shape)
        name = f"k{index + 1}"
        if index == 0:
            bad = np.flatnonzero(values <= 0)
            reason = "must be positive"
        else:
            signs = np.sign(values)
            bad = np.flatnonzero((signs == 0) | (signs != signs[0]))
            reason = "must be nonzero with a fixed sign"
        if bad.size:
            raise InputError(
                f"{name} {reason}; fails at s={s[bad[0]]:.6g}",
                details={"curvature": name, "parameter": float(s[bad[0]])},
                error_code="INVALID_PRESCRIPTION",
            )


def _derivative_table(p: CurvaturePrescription, s: np.ndarray, points: np.ndarray, frames: np.ndarray) -> np.ndarray:
    """Arc-length derivatives of the curve through order 4 at every node.

    In frame coordinates c^(j) = sum_i a_i F_i with a^(1) = e_0 and
    a^(j+1) = a^(j)' + K^T a^(j); curvature jets supply the derivatives of K.
    """
    d = p.metric.dimension
    jets = [eval_jet(e, s) for e in p.curvature_exprs]
    coords = [Jet4.constant(1.0 if i == 0 else 0.0, like=s) for i in range(d)]
    table = np.zeros((len(s), 5, d))
    table[:, 0] = points
    for order in range(1, 5):
        values = np.stack([np.broadcast_to(a.value, s.shape) for a in coords], axis=1)
        table[:, order] = np.einsum("ni,nij->nj", values, frames)
        following = [a.derivative() for a in coords]
        for row, col, index, sign in frenet_pattern(d):
            following[col] = following[col] + sign * jets[index] * coords[row]
        coords = following
    return table


def _rk4_step(point: np.ndarray, frame: np.ndarray, h: float, K0, Kh, K1):
    def rhs(F, K):
        return F[0], K @ F

    dx1, dF1 = rhs(frame, K0)
    dx2, dF2 = rhs(frame + 0.5 * h * dF1, Kh)
    dx3, dF3 = rhs(frame + 0.5 * h * dF2, Kh)
    dx4, dF4 = rhs(frame + h * dF3, K1)
    point = point + h / 6.0 * (dx1 + 2 * dx2 + 2 * dx3 + dx4)
    frame = frame + h / 6.0 * (dF1 + 2 * dF2 + 2 * dF3 + dF4)
    return point, frame


def integrate_frenet_system(
    p: CurvaturePrescription,
    step: Optional[float] = None,
    projection_interval: Optional[int] = None,
    drift_limit: Optional[float] = None,
) -> FrenetTrajectory:
    """Integrate F' = K(s) F together with c' = t over the prescription interval.

    Classical fourth-order steps; every ``projection_interval`` steps the frame
    is re-orthonormalized under the indefinite metric after checking its drift.
    """
    step = settings.SYNTH_STEP if step is None else step
    projection_interval = settings.PROJECTION_INTERVAL if projection_interval is None else projection_interval
    drift_limit = settings.DRIFT_LIMIT if drift_limit is None else drift_limit
    if step <= 0:
        raise InputError("step must be positive", error_code="INVALID_STEP")
    m = p.metric
    require_supported(m)
    validate_prescription(p)

    lo, hi = p.interval
    n = max(1, int(np.ceil((hi - lo) / step - 1e-9)))
    h = (hi - lo) / n
    s = lo + h * np.arange(n + 1)
    signature = m.signature
    signs = np.array(m.frenet_signs, dtype=float)

    frame = p.frame0()
    if _gram_residual(frame, signature, signs) > 1e-9:
        raise InputError("initial frame is not pseudo-orthonormal with the Frenet signs", error_code="INVALID_FRAME")
    point = p.point0()

    nodes_k = np.stack([np.broadcast_to(evaluate(e, s), s.shape) for e in p.curvature_exprs], axis=1)
    mid = s[:-1] + h / 2
    mid_k = np.stack([np.broadcast_to(evaluate(e, mid), mid.shape) for e in p.curvature_exprs], axis=1)

    points = np.empty((n + 1, m.dimension))
    frames = np.empty((n + 1, m.dimension, m.dimension))
    residuals = np.empty(n + 1)
    points[0], frames[0] = point, frame
    residuals[0] = _gram_residual(frame, signature, signs)

    K_next = frenet_matrix(nodes_k[0], m)
    for i in range(n):
        K0, Kh, K_next = K_next, frenet_matrix(mid_k[i], m), frenet_matrix(nodes_k[i + 1], m)
        point, frame = _rk4_step(point, frame, h, K0, Kh, K_next)
        if (i + 1) % projection_interval == 0 or i + 1 == n:
            drift = _gram_residual(frame, signature, signs)
            if drift > drift_limit:
                raise StepSizeError(drift, h, float(s[i + 1]))
            frame = np.array(indefinite_gram_schmidt(frame, m).vectors)
            logger.debug(f"projection at s={s[i + 1]:.6g}: drift {drift:.3e}")
        points[i + 1], frames[i + 1] = point, frame
        residuals[i + 1] = _gram_residual(frame, signature, signs)

    table = _derivative_table(p, s, points, frames)
    logger.info(f"integrated {m} Frenet system on [{lo:.6g}, {hi:.6g}] with {n} steps of {h:.3g}")
    return FrenetTrajectory(
        metric=m,
        s=s,
        points=points,
        frames=frames,
        curvatures=nodes_k,
        gram_residuals=residuals,
        derivative_table=table,
        step=h,
    )


def synthesize(p: CurvaturePrescription, step: Optional[float] = None) -> CurveSpec:
    """Unit-speed sampled curve whose curvatures are those of ``p``."""
    return integrate_frenet_system(p, step).to_curve()
