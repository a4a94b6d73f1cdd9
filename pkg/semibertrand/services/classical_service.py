"""Classical Bertrand checks: offset mates, a k1 + b k2 = 1 fits, and the E2_4 obstruction."""
import logging
from typing import Iterable, Optional

import numpy as np

from semibertrand.core.config import settings
from semibertrand.core.exceptions import InputError, SingularOffsetError
from semibertrand.models.bertrand import ClassicalFit, HyperbolicPair, ObstructionEntry, ObstructionScan, OffsetMate
from semibertrand.models.curve import CurveSpec, FrenetApparatus
from semibertrand.models.metric import E1_2, E1_3, E2_4, SemiMetric
from semibertrand.services.frenet_service import frenet_apparatus, node_apparatus, parameter_derivatives

logger = logging.getLogger(__name__)


def _require(m: SemiMetric, *allowed: SemiMetric) -> None:
    if m not in allowed:
        names = ", ".join(a.tag for a in allowed)
        raise InputError(f"operation needs a curve in {names}, got {m.tag}", error_code="UNSUPPORTED_SPACE")


def _normal_line_residual(n: np.ndarray, nbar: np.ndarray) -> float:
    plus = np.linalg.norm(nbar - n, axis=-1)
    minus = np.linalg.norm(nbar + n, axis=-1)
    return float(np.max(np.minimum(plus, minus)))


def classical_offset_mate(c: CurveSpec, alpha: float, step: Optional[float] = None) -> OffsetMate:
    """Offset curve c + alpha n1 of an E1_2 or E1_3 curve, with its normal-line residual."""
    _require(c.metric, E1_2, E1_3)
    app = node_apparatus(c, step)
    k1 = app.k1
    if c.metric == E1_2:
        speed_sq = (1.0 + alpha * k1) ** 2
    else:
        speed_sq = (1.0 + alpha * k1) ** 2 - (alpha * app.k2) ** 2
    min_speed = float(np.sqrt(max(float(speed_sq.min()), 0.0)))
    if speed_sq.min() <= settings.MATE_SPEED_TOL**2:
        raise SingularOffsetError(alpha, min_speed)

    base = parameter_derivatives(c, app.parameters, max_order=0)[:, 0]
    mate = CurveSpec.sampled(c.metric, app.s, base + alpha * app.n1)
    if alpha == 0.0:
        return OffsetMate(alpha=alpha, curve=mate, residual=0.0, min_speed=min_speed)

    mate_app = frenet_apparatus(mate, grid_size=len(app.s))
    own = frenet_apparatus(c, grid=mate_app.parameters)
    residual = _normal_line_residual(own.n1, mate_app.n1)
    logger.info(f"offset mate at alpha={alpha:.6g}: normal-line residual {residual:.3e}")
    return OffsetMate(alpha=alpha, curve=mate, residual=residual, min_speed=min_speed)


def planar_parallel_mate(c: CurveSpec, alpha: float, step: Optional[float] = None) -> OffsetMate:
    """Parallel curve c + alpha n of a timelike plane curve in E1_2."""
    _require(c.metric, E1_2)
    return classical_offset_mate(c, alpha, step)


def fit_classical_relation(app: FrenetApparatus, tol: Optional[float] = None, margin: Optional[float] = None) -> Optional[ClassicalFit]:
    """Least-squares fit of a k1 + b k2 = 1; None when no nonzero constants fit."""
    _require(app.metric, E1_3)
    tol = settings.CLASSICAL_FIT_TOL if tol is None else tol
    margin = settings.TOL_MARGIN if margin is None else margin
    design = np.column_stack([app.k1, app.k2])
    (a, b), _, rank, _ = np.linalg.lstsq(design, np.ones(len(app)), rcond=1e-9)
    residual = float(np.max(np.abs(design @ np.array([a, b]) - 1.0)))
    if residual > tol:
        logger.info(f"no constants satisfy a k1 + b k2 = 1 (residual {residual:.3e})")
        return None
    if min(abs(a), abs(b)) <= margin:
        logger.info(f"fit a={a:.6g}, b={b:.6g} has a vanishing constant")
        return None
    return ClassicalFit(a=float(a), b=float(b), residual=residual, family_flag=bool(rank < 2))


def obstruction_entry(k1: np.ndarray, k2: np.ndarray, k3: np.ndarray, alpha: float) -> ObstructionEntry:
    """min over s of |k3 sinh theta| for the classical candidate c + alpha n1.

    The candidate tangent is ((1 + alpha k1) t + alpha k2 n2) / phi' with
    phi'^2 = (1 + alpha k1)^2 - (alpha k2)^2; it is timelike only where that is positive. Null offsets give an infinite value.
    """
    if alpha == 0.0:
        return ObstructionEntry(alpha=alpha, value=0.0, feasible=True, theta=HyperbolicPair(c=1.0, sigma=0.0))
    delta = (1.0 + alpha * k1) ** 2 - (alpha * k2) ** 2
    feasible = bool(np.all(delta > settings.MATE_SPEED_TOL))
    with np.errstate(divide="ignore"):
        phi_prime = np.sqrt(np.abs(delta))
        values = np.abs(k3 * alpha * k2) / phi_prime
    i = int(np.argmin(values))
    theta = None
    if feasible:
        theta = HyperbolicPair(c=float((1.0 + alpha * k1[i]) / phi_prime[i]), sigma=float(alpha * k2[i] / phi_prime[i]))
    return ObstructionEntry(alpha=float(alpha), value=float(values[i]), feasible=feasible, theta=theta)


def classical_obstruction_scan(app: FrenetApparatus, alphas: Iterable[float]) -> ObstructionScan:
    """Evaluate the classical-mate obstruction of an E2_4 curve for each offset."""
    _require(app.metric, E2_4)
    entries = [obstruction_entry(app.k1, app.k2, app.k3, float(a)) for a in alphas]
    infeasible = sum(not e.feasible for e in entries)
    logger.info(f"obstruction scan over {len(entries)} offsets ({infeasible} infeasible)")
    return ObstructionScan(entries=entries)
