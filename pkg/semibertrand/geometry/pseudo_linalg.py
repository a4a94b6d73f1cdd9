"""Vector algebra under an indefinite flat metric.

All functions are pure: they accept array-likes, return fresh arrays or
immutable records, and never mutate their inputs.
"""
import logging
from typing import Optional, Sequence

import numpy as np

from semibertrand.core.config import settings
from semibertrand.core.exceptions import (
    DegenerateFlagError,
    RankDeficientError,
    raise_dimension_mismatch,
)
from semibertrand.models.metric import CausalCharacter, PseudoFrame, SemiMetric

logger = logging.getLogger(__name__)


def _as_vector(v, m: SemiMetric) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape[-1] != m.dimension:
        raise_dimension_mismatch(m.dimension, arr.shape[-1])
    return arr


def inner(v, w, m: SemiMetric):
    """Return g(v, w); broadcasts over leading axes."""
    v = _as_vector(v, m)
    w = _as_vector(w, m)
    return np.sum(v * w * m.signature, axis=-1)


def squared_norm(v, m: SemiMetric):
    """Return g(v, v)."""
    return inner(v, v, m)


def norm(v, m: SemiMetric):
    """Return sqrt(|g(v, v)|)."""
    return np.sqrt(np.abs(squared_norm(v, m)))


def causal_character(v, m: SemiMetric, tol: Optional[float] = None) -> CausalCharacter:
    """Classify ``v``; the zero vector counts as spacelike.

    |g(v,v)| <= tol * |v|_E^2 is treated as null, so the test scales with v.
    """
    tol = settings.NULL_TOL if tol is None else tol
    v = _as_vector(v, m)
    euclid = float(np.dot(v, v))
    if euclid == 0.0:
        return CausalCharacter.SPACELIKE
    q = float(squared_norm(v, m))
    if abs(q) <= tol * euclid:
        return CausalCharacter.NULL
    return CausalCharacter.TIMELIKE if q < 0 else CausalCharacter.SPACELIKE


def indefinite_gram_schmidt(
    vs: Sequence,
    m: SemiMetric,
    null_tol: Optional[float] = None,
    rank_tol: Optional[float] = None,
) -> PseudoFrame:
    """Orthonormalize ``vs`` in order under g.

    Each output vector lies in the span of the inputs up to its position and
    has a positive component along its own input. Projections are applied
    twice to contain cancellation.
    """
    null_tol = settings.NULL_TOL if null_tol is None else null_tol
    rank_tol = settings.RANK_TOL if rank_tol is None else rank_tol
    vectors = np.atleast_2d(_as_vector(vs, m))
    if vectors.shape[0] > m.dimension:
        raise RankDeficientError(index=m.dimension)

    out = []
    signs = []
    for i, v in enumerate(vectors):
        r = v.copy()
        for _ in range(2):
            for e, sign in zip(out, signs):
                r = r - sign * inner(r, e, m) * e
        scale = float(np.linalg.norm(v))
        r_euclid = float(np.linalg.norm(r))
        if scale == 0.0 or r_euclid <= rank_tol * scale:
            raise RankDeficientError(index=i)
        q = float(squared_norm(r, m))
        if abs(q) <= null_tol * r_euclid**2:
            raise DegenerateFlagError(order=i + 1, message=f"vector {i} leaves a null residual")
        sign = -1 if q < 0 else 1
        out.append(r / np.sqrt(abs(q)))
        signs.append(sign)

    return PseudoFrame(vectors=np.array(out), metric=m, expected_signs=tuple(signs))


def orient(frame: PseudoFrame) -> PseudoFrame:
    """Return ``frame`` with determinant +1, flipping the last vector if needed."""
    if frame.determinant() > 0:
        return frame
    vectors = np.array(frame.vectors)
    vectors[-1] = -vectors[-1]
    logger.debug("flipped last frame vector to restore det = +1")
    return PseudoFrame(
        vectors=vectors,
        metric=frame.metric,
        expected_signs=frame.expected_signs,
        orientation_flipped=True,
    )


def project_to_frame(frame: PseudoFrame, v) -> np.ndarray:
    """Components c_i of ``v`` with v = sum c_i e_i (complete frames only)."""
    v = _as_vector(v, frame.metric)
    return np.array(frame.expected_signs) * (frame.vectors * frame.metric.signature) @ v
