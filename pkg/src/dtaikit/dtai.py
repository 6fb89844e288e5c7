"""Design Target Achievement Index.

Each objective's performance is compared to its target through the ratio
``r = p / t``. Below target the per-objective score falls linearly with slope
``alpha``; above target it saturates exponentially towards ``alpha / beta``.
The summed score is rescaled by its attainable extremes into ``[0, 1)``.

The score is smooth at ``r = 1`` (value 0, slope ``alpha`` from both sides),
so the closed-form gradient below is usable as a training or ascent signal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidParameter, NonPositiveInput, NoPerformance
from .model import DesignSet, TargetSpec


@dataclass(frozen=True)
class DtaiBreakdown:
    r: np.ndarray
    s: np.ndarray
    s_min: float
    s_max: float
    dtai: float
    grad_p: np.ndarray


def _check_positive(p: np.ndarray, what: str) -> None:
    bad = ~(p > 0)
    if np.any(bad):
        idx = np.argwhere(bad)[0]
        raise NonPositiveInput(int(idx[-1]), what)


def ratio(p, targets: TargetSpec) -> np.ndarray:
    """Elementwise performance-to-target ratio; ``p`` may be ``(n,)`` or ``(m, n)``."""
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != targets.n:
        raise DimensionMismatch(f"{p.shape[-1]} performance values for {targets.n} targets")
    _check_positive(p, "performance")
    return p / targets.t


def _check_params(alpha, beta) -> None:
    if np.any(~(np.asarray(alpha) > 0)) or np.any(~(np.asarray(beta) > 0)):
        raise InvalidParameter("alpha and beta must be > 0")


def objective_score(r, alpha, beta, printed_sign: bool = False):
    """Per-objective target achievement score.

    ``alpha * (r - 1)`` for ``r <= 1`` and ``alpha / beta * (1 - exp(beta * (1 - r)))``
    above. With ``printed_sign=True`` the lower branch is ``alpha * (1 - r)``
    instead; that variant is kept only to demonstrate that it breaks the
    ``[0, 1]`` bound and the continuity of the derivative.
    """
    _check_params(alpha, beta)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise InvalidParameter("ratio must be >= 0")
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    # exponent is <= 0 wherever the upper branch is selected
    upper = alpha / beta * -np.expm1(beta * np.minimum(1.0 - r, 0.0))
    lower = alpha * (1.0 - r) if printed_sign else alpha * (r - 1.0)
    out = np.where(r <= 1.0, lower, upper)
    return float(out) if out.ndim == 0 else out


def score_derivative(r, alpha, beta, printed_sign: bool = False):
    """d(objective_score)/dr; equals ``alpha`` at ``r = 1``."""
    _check_params(alpha, beta)
    r = np.asarray(r, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    upper = alpha * np.exp(beta * np.minimum(1.0 - r, 0.0))
    lower = -alpha if printed_sign else alpha
    out = np.where(r <= 1.0, lower * np.ones_like(r), upper)
    return float(out) if out.ndim == 0 else out


def score_bounds(targets: TargetSpec) -> tuple[float, float]:
    """Attainable extremes of the summed score: ``(-sum(alpha), sum(alpha / beta))``."""
    return -float(np.sum(targets.alpha)), float(np.sum(targets.alpha / targets.beta))


def dtai_scores(P, targets: TargetSpec, printed_sign: bool = False, with_grad: bool = False):
    """Vectorized DTAI over rows of ``P`` (shape ``(m, n)`` or ``(n,)``).

    Returns the DTAI values, and with ``with_grad`` also ``dDTAI/dp`` of the
    same shape as ``P``.
    """
    r = ratio(P, targets)
    s = objective_score(r, targets.alpha, targets.beta, printed_sign)
    s_min, s_max = score_bounds(targets)
    span = s_max - s_min
    value = (np.sum(s, axis=-1) - s_min) / span
    if not with_grad:
        return value
    ds = score_derivative(r, targets.alpha, targets.beta, printed_sign)
    return value, ds / (targets.t * span)


def dtai(p, targets: TargetSpec, printed_sign: bool = False) -> DtaiBreakdown:
    """Score one performance vector and return every intermediate quantity."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise DimensionMismatch("dtai() scores a single performance vector")
    r = ratio(p, targets)
    s = np.atleast_1d(objective_score(r, targets.alpha, targets.beta, printed_sign))
    s_min, s_max = score_bounds(targets)
    value, grad = dtai_scores(p, targets, printed_sign, with_grad=True)
    return DtaiBreakdown(r=r, s=s, s_min=s_min, s_max=s_max, dtai=float(value), grad_p=grad)


def dtai_batch(dataset: DesignSet, targets: TargetSpec, printed_sign: bool = False) -> list[DtaiBreakdown]:
    if dataset.performance is None or len(dataset) == 0:
        raise NoPerformance("set carries no performance values")
    return [dtai(p, targets, printed_sign) for p in dataset.performance]
