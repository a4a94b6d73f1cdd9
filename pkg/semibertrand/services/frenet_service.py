"""Arc length, causal checks and Frenet apparatus of timelike curves.

Frame conventions (rows of each frame are t, n1, n2, n3):

* E2_4: signs (-,-,+,+); t' = -k1 n1, n1' = k1 t + k2 n2, n2' = k2 n1 + k3 n3, n3' = -k3 n2.
  n2 is oriented so that k2 > 0 and n3 completes det = +1.
* E1_3: signs (-,+,+); t' = k1 n1, n1' = k1 t + k2 n2, n2' = -k2 n1; n2 completes det = +1.
* E1_2: signs (-,+); t' = k1 n, n' = k1 t; a det = -1 frame is only flagged.
"""
import logging
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import newton

from semibertrand.core.config import settings
from semibertrand.core.exceptions import (
    ConventionViolationError,
    CurvatureSignChangeError,
    DegenerateFlagError,
    InputError,
    NonTimelikeCurveError,
    RankDeficientError,
)
from semibertrand.dsl.jets import eval_jet
from semibertrand.geometry.pseudo_linalg import causal_character, indefinite_gram_schmidt, inner, orient
from semibertrand.models.curve import CausalProfile, CurveSpec, FrenetApparatus
from semibertrand.models.metric import CausalCharacter, PseudoFrame, SemiMetric
from semibertrand.utils.constants import SPACES
from semibertrand.utils.finite_differences import (
    five_point_derivative,
    margin_nodes,
    richardson_derivatives,
    uniform_spacing,
)

logger = logging.getLogger(__name__)

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(8)


_PATTERNS = {
    2: ((0, 1, 0, 1.0), (1, 0, 0, 1.0)),
    3: ((0, 1, 0, 1.0), (1, 0, 0, 1.0), (1, 2, 1, 1.0), (2, 1, 1, -1.0)),
    4: (
        (0, 1, 0, -1.0),
        (1, 0, 0, 1.0),
        (1, 2, 1, 1.0),
        (2, 1, 1, 1.0),
        (2, 3, 2, 1.0),
        (3, 2, 2, -1.0),
    ),
}


def frenet_pattern(dimension: int) -> Tuple[Tuple[int, int, int, float], ...]:
    """Nonzero entries of K as (row, column, curvature index, sign)."""
    return _PATTERNS[dimension]


def frenet_matrix(k: Sequence[float], m: SemiMetric) -> np.ndarray:
    """Coefficient matrix K with F' = K F for the frame rows F."""
    K = np.zeros((m.dimension, m.dimension))
    for row, col, index, sign in frenet_pattern(m.dimension):
        K[row, col] = sign * k[index]
    return K


def require_supported(m: SemiMetric) -> None:
    if m.tag not in SPACES:
        raise InputError(f"Frenet theory is not provided for {m.tag}", error_code="UNSUPPORTED_SPACE")


def _snap(c: CurveSpec, t) -> np.ndarray:
    """Indices of the sample nodes nearest to ``t``."""
    positions = np.interp(np.asarray(t, dtype=float), c.parameters, np.arange(len(c.parameters)))
    return np.clip(np.rint(positions).astype(int), 0, len(c.parameters) - 1)


def parameter_derivatives(c: CurveSpec, t, max_order: int = 4) -> np.ndarray:
    """Derivatives 0..max_order with respect to the curve parameter.

    Shape (len(t), max_order + 1, dimension). Sampled curves are evaluated at
    the nearest node.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if c.is_analytic:
        stacked = np.stack([eval_jet(e, t).derivatives() for e in c.components], axis=-1)
        return np.transpose(stacked, (1, 0, 2))[:, : max_order + 1]
    idx = _snap(c, t)
    if c.derivative_table is not None:
        return np.array(c.derivative_table[idx, : max_order + 1])
    spacing = uniform_spacing(c.parameters)
    return richardson_derivatives(c.points, spacing, idx, max_order=max_order)


def _velocity(c: CurveSpec, t) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if c.is_analytic:
        return parameter_derivatives(c, t, max_order=1)[:, 1]
    if c.derivative_table is not None:
        return np.array(c.derivative_table[_snap(c, t), 1])
    return CubicSpline(c.parameters, c.points, axis=0).derivative()(t)


def _speed(c: CurveSpec, t) -> np.ndarray:
    v = _velocity(c, t)
    return np.sqrt(np.abs(inner(v, v, c.metric)))


def speed_and_character(c: CurveSpec, t0: float) -> Tuple[float, CausalCharacter]:
    """Speed sqrt(|g(c', c')|) and causal character of c'(t0)."""
    lo, hi = c.domain
    if not lo <= t0 <= hi:
        raise InputError(f"parameter {t0} outside the domain [{lo}, {hi}]", error_code="OUT_OF_DOMAIN")
    v = _velocity(c, [t0])[0]
    speed = float(np.sqrt(abs(inner(v, v, c.metric))))
    return speed, causal_character(v, c.metric)


def _check_points(c: CurveSpec, points: Optional[int]) -> np.ndarray:
    if not c.is_analytic:
        return np.array(c.parameters)
    n = settings.TIMELIKE_CHECK_POINTS if points is None else points
    return np.linspace(c.domain[0], c.domain[1], n)


def causal_profile(c: CurveSpec, points: Optional[int] = None) -> CausalProfile:
    """Classify the velocity on a dense grid (analytic) or at every node (sampled)."""
    t = _check_points(c, points)
    v = _velocity(c, t)
    q = inner(v, v, c.metric)
    euclid = np.sum(v * v, axis=-1)
    null = (np.abs(q) <= settings.NULL_TOL * euclid) & (euclid > 0)
    timelike = (q < 0) & ~null
    spacelike = ~timelike & ~null
    counts = {
        CausalCharacter.TIMELIKE.value: int(timelike.sum()),
        CausalCharacter.SPACELIKE.value: int(spacelike.sum()),
        CausalCharacter.NULL.value: int(null.sum()),
    }
    bad = np.flatnonzero(~timelike)
    if bad.size == 0:
        return CausalProfile(metric=c.metric, counts=counts)
    i = int(bad[0])
    character = CausalCharacter.NULL if null[i] else CausalCharacter.SPACELIKE
    return CausalProfile(
        metric=c.metric,
        counts=counts,
        first_violation=float(t[i]),
        first_violation_character=character.value,
    )


def check_timelike(c: CurveSpec, points: Optional[int] = None) -> None:
    profile = causal_profile(c, points)
    if profile.first_violation is not None:
        raise NonTimelikeCurveError(profile.first_violation, profile.first_violation_character)


class ArcLength:
    """Arc-length function s(t) of a curve, measured from the domain start."""

    def __init__(self, c: CurveSpec, panels: Optional[int] = None):
        self.curve = c
        self.lo, self.hi = c.domain
        if c.is_analytic:
            panels = settings.ARCLENGTH_PANELS if panels is None else panels
            self.edges = np.linspace(self.lo, self.hi, panels + 1)
            half = np.diff(self.edges) / 2.0
            nodes = self.edges[:-1, None] + half[:, None] * (_GAUSS_NODES[None, :] + 1.0)
            speed = _speed(c, nodes.ravel()).reshape(nodes.shape)
            self.cumulative = np.concatenate([[0.0], np.cumsum(half * (speed @ _GAUSS_WEIGHTS))])
        elif c.unit_speed:
            self.edges = np.array(c.parameters)
            self.cumulative = self.edges - self.lo
        else:
            speed = _speed(c, c.parameters)
            self.edges = np.array(c.parameters)
            antiderivative = CubicSpline(c.parameters, speed).antiderivative()
            self.cumulative = antiderivative(self.edges) - antiderivative(self.lo)

    @property
    def total(self) -> float:
        return float(self.cumulative[-1])

    def speed(self, t) -> np.ndarray:
        return _speed(self.curve, t)

    def __call__(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if not self.curve.is_analytic:
            return np.interp(t, self.edges, self.cumulative)
        width = self.edges[1] - self.edges[0]
        j = np.clip(((t - self.lo) // width).astype(int), 0, len(self.edges) - 2)
        start = self.edges[j]
        half = (t - start) / 2.0
        nodes = start[:, None] + half[:, None] * (_GAUSS_NODES[None, :] + 1.0)
        speed = self.speed(nodes.ravel()).reshape(nodes.shape)
        return self.cumulative[j] + half * (speed @ _GAUSS_WEIGHTS)

    def inverse(self, s) -> np.ndarray:
        """Parameter values t with s(t) = s."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        guess = np.interp(s, self.cumulative, self.edges)
        if not self.curve.is_analytic:
            return guess

        def clipped(t):
            return np.clip(t, self.lo, self.hi)

        return clipped(
            newton(
                lambda t: self(clipped(t)) - s,
                guess,
                fprime=lambda t: self.speed(clipped(t)),
                tol=1e-12,
                maxiter=100,
            )
        )


def arclength(c: CurveSpec, t) -> np.ndarray:
    """Arc length from the start of the domain to each parameter in ``t``."""
    return ArcLength(c)(t)


def arclength_reparam(c: CurveSpec, step: Optional[float] = None) -> CurveSpec:
    """Resample ``c`` at uniform arc-length nodes; the result is unit speed."""
    step = settings.REPARAM_STEP if step is None else step
    check_timelike(c)
    arc = ArcLength(c)
    n = int(np.ceil(arc.total / step)) + 1
    s = np.linspace(0.0, arc.total, n)
    t = arc.inverse(s)
    if c.is_analytic:
        points = parameter_derivatives(c, t, max_order=0)[:, 0]
    else:
        points = CubicSpline(c.parameters, c.points, axis=0)(t)
    logger.debug(f"reparametrized {c.metric} curve by arc length: length {arc.total:.10g}, {n} nodes")
    return CurveSpec.sampled(c.metric, s, points, unit_speed=True)


def _frame_at(derivs: np.ndarray, m: SemiMetric, parameter: float) -> Tuple[np.ndarray, np.ndarray, bool]:
    """Frame rows and curvatures at one sample from parameter derivatives 0..d."""
    d = m.dimension
    try:
        frame = indefinite_gram_schmidt(
            derivs[1 : d + 1], m, null_tol=settings.DEGENERACY_TOL, rank_tol=settings.DEGENERACY_TOL
        )
    except RankDeficientError as exc:
        raise DegenerateFlagError(
            order=exc.index + 1,
            message=f"derivative {exc.index + 1} is dependent on lower derivatives at parameter {parameter:.6g}",
            parameter=parameter,
        ) from None
    except DegenerateFlagError as exc:
        raise DegenerateFlagError(order=exc.order, message=exc.message, parameter=parameter) from None

    signs = frame.expected_signs
    if signs[0] != -1:
        raise NonTimelikeCurveError(parameter, CausalCharacter.SPACELIKE.value)
    vectors = np.array(frame.vectors)
    if d == 4:
        if signs[1] != -1:
            raise ConventionViolationError("n1", CausalCharacter.TIMELIKE.value, parameter)
        vectors[1] = -vectors[1]
        vectors[2] = -vectors[2]
    frame = PseudoFrame(vectors=vectors, metric=m, expected_signs=m.frenet_signs)
    if d > 2:
        frame = orient(frame)
        flipped = frame.orientation_flipped
    else:
        flipped = frame.determinant() < 0

    vectors = np.array(frame.vectors)
    v = np.sqrt(-inner(derivs[1], derivs[1], m))
    sigma = -1.0 if d == 4 else 1.0
    eps = np.array(m.frenet_signs, dtype=float)
    products = [1.0]
    for i in range(1, d):
        products.append(sigma * eps[i] * inner(derivs[i + 1], vectors[i], m) / v ** (i + 1))
    k = np.array([products[i] / products[i - 1] for i in range(1, d)])
    return vectors, k, flipped


def _check_sign_changes(k: np.ndarray, s: np.ndarray) -> None:
    for col in range(1, k.shape[1]):
        signs = np.sign(k[:, col])
        change = np.flatnonzero(signs[1:] != signs[:-1])
        if change.size:
            raise CurvatureSignChangeError(f"k{col + 1}", float(s[change[0] + 1]))


def _grid_range(c: CurveSpec, arc: ArcLength) -> Tuple[float, float]:
    if c.is_analytic or c.derivative_table is not None:
        return 0.0, arc.total
    reach = margin_nodes(uniform_spacing(c.parameters))
    if 2 * reach >= len(c.parameters):
        raise InputError("too few samples for finite differences", error_code="FD_MARGIN")
    return float(arc.cumulative[reach]), float(arc.cumulative[-1 - reach])


def frenet_apparatus(
    c: CurveSpec,
    grid: Optional[Sequence[float]] = None,
    grid_size: Optional[int] = None,
) -> FrenetApparatus:
    """Frame and curvatures of a timelike curve at arc-length values ``grid``.

    Without a grid, ``grid_size`` uniform arc-length samples span the usable
    range of the curve. Sampled curves are evaluated at the nearest node.
    """
    m = c.metric
    require_supported(m)
    check_timelike(c)
    arc = ArcLength(c)
    if grid is None:
        lo_s, hi_s = _grid_range(c, arc)
        grid = np.linspace(lo_s, hi_s, settings.GRID_SIZE if grid_size is None else grid_size)
    grid = np.asarray(grid, dtype=float)
    if grid.min() < -1e-12 or grid.max() > arc.total + 1e-12:
        raise InputError(
            f"grid leaves the arc-length range [0, {arc.total:.10g}]", error_code="OUT_OF_DOMAIN"
        )

    if c.is_analytic:
        s = grid
        t = arc.inverse(grid)
        derivs = parameter_derivatives(c, t)
    else:
        idx = np.clip(
            np.rint(np.interp(grid, arc.cumulative, np.arange(len(arc.cumulative)))).astype(int),
            0,
            len(arc.cumulative) - 1,
        )
        s = arc.cumulative[idx]
        t = c.parameters[idx]
        derivs = parameter_derivatives(c, t)

    frames = np.empty((len(s), m.dimension, m.dimension))
    k = np.empty((len(s), m.dimension - 1))
    flipped = False
    for i in range(len(s)):
        frames[i], k[i], f = _frame_at(derivs[i], m, float(t[i]))
        flipped = flipped or f
    if flipped and m.dimension == 2:
        logger.warning("E1_2 frame has determinant -1 somewhere on the curve")
    _check_sign_changes(k, t)

    logger.debug(f"apparatus of {m} curve on {len(s)} samples ({c.mode} mode)")
    return FrenetApparatus(
        metric=m,
        s=s,
        parameters=t,
        frames=frames,
        k1=k[:, 0],
        k2=k[:, 1] if m.dimension > 2 else None,
        k3=k[:, 2] if m.dimension > 3 else None,
        orientation_flipped=flipped,
    )


def node_apparatus(c: CurveSpec, step: Optional[float] = None) -> FrenetApparatus:
    """Apparatus on a fine uniform arc-length grid.

    Unit-speed sampled curves use every usable node; other curves use a grid
    whose spacing is close to ``step``. Sampled curves that are not unit speed
    are reparametrized first.
    """
    step = settings.SYNTH_STEP if step is None else step
    if not c.is_analytic and not c.unit_speed:
        c = arclength_reparam(c, step)
    if not c.is_analytic:
        arc = ArcLength(c)
        lo_s, hi_s = _grid_range(c, arc)
        nodes = arc.cumulative
        return frenet_apparatus(c, grid=nodes[(nodes >= lo_s) & (nodes <= hi_s)])
    total = ArcLength(c).total
    n = int(np.ceil(total / step)) + 1
    return frenet_apparatus(c, grid=np.linspace(0.0, total, n))


def frenet_equation_residual(app: FrenetApparatus) -> float:
    """Max-norm gap between a 5-point difference of the frames and K F.

    Evaluated at interior samples; the arc-length grid must be uniform.
    """
    if len(app) < 5:
        raise InputError("need at least five samples", error_code="GRID_TOO_SMALL")
    h = uniform_spacing(app.s)
    derivative = five_point_derivative(app.frames, h)
    k = app.curvatures()[2:-2]
    rhs = np.stack([frenet_matrix(row, app.metric) @ f for row, f in zip(k, app.frames[2:-2])])
    return float(np.max(np.abs(derivative - rhs)))
