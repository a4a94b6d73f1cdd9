"""Finite-difference derivatives on uniformly spaced samples."""
import logging
from typing import Optional

import numpy as np

from semibertrand.core.config import settings
from semibertrand.core.exceptions import InputError

logger = logging.getLogger(__name__)

# five-point central stencils on offsets (-2, -1, 0, 1, 2): (weights, divisor, leading error order)
STENCILS = {
    1: (np.array([1.0, -8.0, 0.0, 8.0, -1.0]), 12.0, 4),
    2: (np.array([-1.0, 16.0, -30.0, 16.0, -1.0]), 12.0, 4),
    3: (np.array([-1.0, 2.0, 0.0, -2.0, 1.0]), 2.0, 2),
    4: (np.array([1.0, -4.0, 6.0, -4.0, 1.0]), 1.0, 2),
}
_OFFSETS = np.arange(-2, 3)


def uniform_spacing(parameters: np.ndarray) -> float:
    """Return the common spacing of ``parameters`` or raise."""
    gaps = np.diff(parameters)
    h = float(np.mean(gaps))
    if np.max(np.abs(gaps - h)) > 1e-9 * max(h, 1.0):
        raise InputError(
            "finite differences need uniformly spaced samples", error_code="NON_UNIFORM_SAMPLES"
        )
    return h


def stencil_multiple(spacing: float, step: Optional[float] = None) -> int:
    """Number of nodes per finite-difference step, at least one."""
    step = settings.FD_STEP if step is None else step
    return max(1, int(round(step / spacing)))


def margin_nodes(spacing: float, step: Optional[float] = None, levels: Optional[int] = None) -> int:
    """Nodes needed on either side of an evaluation point."""
    levels = settings.RICHARDSON_LEVELS if levels is None else levels
    return 2 * stencil_multiple(spacing, step) * 2 ** (levels - 1)


def richardson_derivatives(
    values: np.ndarray,
    spacing: float,
    indices: np.ndarray,
    max_order: int = 4,
    step: Optional[float] = None,
    levels: Optional[int] = None,
) -> np.ndarray:
    """Derivatives 0..max_order of sampled ``values`` at node ``indices``.

    ``values`` has shape (N, d); the result has shape (len(indices), max_order + 1, d).
    Level j uses the stencil with step h * 2**j; the tableau removes the leading
    error terms of the central stencils, which are even in h.
    """
    levels = settings.RICHARDSON_LEVELS if levels is None else levels
    values = np.asarray(values, dtype=float)
    indices = np.asarray(indices, dtype=int)
    m0 = stencil_multiple(spacing, step)
    reach = margin_nodes(spacing, step, levels)
    if indices.size and (indices.min() < reach or indices.max() > len(values) - 1 - reach):
        raise InputError(
            "evaluation point too close to the sample boundary for finite differences",
            details={"margin_nodes": reach},
            error_code="FD_MARGIN",
        )

    out = np.empty((len(indices), max_order + 1) + values.shape[1:])
    out[:, 0] = values[indices]
    for order in range(1, max_order + 1):
        weights, divisor, p0 = STENCILS[order]
        tableau = []
        for j in range(levels):
            m = m0 * 2**j
            h = spacing * m
            window = values[indices[:, None] + _OFFSETS[None, :] * m]
            tableau.append(np.einsum("o,no...->n...", weights, window) / (divisor * h**order))
        for k in range(1, levels):
            factor = 2.0 ** (p0 + 2 * (k - 1)) - 1.0
            tableau = [tableau[j] + (tableau[j] - tableau[j + 1]) / factor for j in range(len(tableau) - 1)]
        out[:, order] = tableau[0]
    return out


def five_point_derivative(values: np.ndarray, spacing: float) -> np.ndarray:
    """First derivative at interior nodes 2..N-3 of a uniform sample."""
    values = np.asarray(values, dtype=float)
    weights, divisor, _ = STENCILS[1]
    n = len(values)
    window = np.stack([values[2 + o : n - 2 + o] for o in _OFFSETS], axis=0)
    return np.einsum("o,o...->...", weights, window) / (divisor * spacing)
