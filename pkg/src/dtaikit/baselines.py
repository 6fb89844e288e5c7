"""Trivial generators and the random-weight aggregate score.

``sample_dataset`` and ``interpolate`` are the two reference "generators" any
learned model should beat. ``random_weight_score`` is the multi-objective
aggregate that draws a fresh convex weighting for every score.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from .errors import ConstantObjective, EmptyDataset, InvalidParameter, NoPerformance, OutOfRange, TooFewDesigns
from .model import DesignSet

_SEED_LIMIT = 2**64


def _rng(seed: int) -> np.random.Generator:
    seed = int(seed)
    if not 0 <= seed < _SEED_LIMIT:
        raise InvalidParameter(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.default_rng(seed)


def _check_count(count: int) -> int:
    if int(count) < 1:
        raise InvalidParameter("count must be positive")
    return int(count)


def sample_dataset(dataset: DesignSet, count: int, seed: int) -> DesignSet:
    """Draw ``count`` designs uniformly with replacement; performance is carried along."""
    count = _check_count(count)
    if len(dataset) == 0:
        raise EmptyDataset("cannot sample from an empty dataset")
    idx = _rng(seed).integers(0, len(dataset), size=count)
    return replace(dataset.take(idx), feasible=None)


def interpolate(dataset: DesignSet, count: int, seed: int, gamma=None) -> DesignSet:
    """Blend random pairs of designs: ``gamma * d1 + (1 - gamma) * d2``.

    Categorical columns copy ``d1`` when ``gamma >= 0.5`` and ``d2`` otherwise.
    ``gamma`` may be fixed (scalar or per-output array) instead of drawn from
    ``Uniform[0, 1]``. Outputs carry no performance.
    """
    count = _check_count(count)
    if len(dataset) < 2:
        raise TooFewDesigns("interpolation needs at least 2 designs")
    rng = _rng(seed)
    i1 = rng.integers(0, len(dataset), size=count)
    i2 = rng.integers(0, len(dataset), size=count)
    g = rng.uniform(0.0, 1.0, size=count)
    if gamma is not None:
        g = np.broadcast_to(np.asarray(gamma, dtype=float), (count,))
    if np.any((g < 0) | (g > 1)):
        raise InvalidParameter("gamma must lie in [0, 1]")
    d1, d2 = dataset.values[i1], dataset.values[i2]
    values = g[:, None] * d1 + (1.0 - g[:, None]) * d2
    labels = np.where((g >= 0.5)[:, None], dataset.labels[i1], dataset.labels[i2])
    return DesignSet(dataset.schema, values, labels, objective_names=dataset.objective_names)


def simplex_weights(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform draw from the probability simplex (normalized unit exponentials)."""
    w = rng.exponential(1.0, size=n)
    return w / w.sum()


def random_weight_score(p_normalized, seed: int) -> float:
    """Randomly weighted average of min-max normalized objective values."""
    p = np.asarray(p_normalized, dtype=float).reshape(-1)
    bad = np.flatnonzero((p < -1e-9) | (p > 1 + 1e-9))
    if bad.size:
        raise OutOfRange(int(bad[0]), float(p[bad[0]]))
    w = simplex_weights(p.size, _rng(seed))
    return float(w @ np.clip(p, 0.0, 1.0))


def normalize_minmax(dataset: DesignSet) -> tuple[np.ndarray, tuple[np.ndarray, np.ndarray]]:
    """Min-max normalize attached performance per objective; returns values and ``(lo, hi)``."""
    if dataset.performance is None or len(dataset) == 0:
        raise NoPerformance("performance must be attached")
    perf = dataset.performance
    lo, hi = perf.min(axis=0), perf.max(axis=0)
    flat = np.flatnonzero(~(hi > lo))
    if flat.size:
        raise ConstantObjective(int(flat[0]))
    return apply_minmax(perf, (lo, hi)), (lo, hi)


def apply_minmax(perf, bounds) -> np.ndarray:
    """Normalize with previously fitted bounds, clamping to ``[0, 1]``."""
    lo, hi = bounds
    return np.clip((np.asarray(perf, dtype=float) - lo) / (hi - lo), 0.0, 1.0)
