"""Evaluation metrics for sets of generated designs.

Set-level scores are the hypervolume (HV) and geometric feasibility rate
(GFR). Per-design scores are design- and performance-space diversity
(DSD / PSD), design novelty (DN), DTAI, target success rate (TSR) and minimum
target ratio (MTR); their distributions over a set are summarized with Gaussian
kernel density estimates.

All performance inputs use the larger-is-better, strictly positive convention
produced by :func:`dtaikit.model.adjust_performance`.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial.distance import cdist, pdist, squareform

from .dtai import dtai_scores
from .errors import (
    DegenerateSamples,
    DimensionMismatch,
    DtaiError,
    EmptyDataset,
    EmptyFront,
    EmptyInput,
    InvalidParameter,
    NonPositiveInput,
    NoFeasibleDesigns,
    NoPerformance,
    TooFewDesigns,
)
from .model import DesignSet, Standardizer, TargetSpec, encode_set

log = logging.getLogger(__name__)

EXACT_MAX_DIM = 6
EXACT_MAX_POINTS = 300
DEFAULT_MC_SAMPLES = 10**6
_MC_CHUNK = 1 << 16

PER_DESIGN_METRICS = ("DSD", "PSD", "DN", "DTAI", "TSR", "MTR")
TABLE_METRICS = ("DSD", "PSD", "DN", "GFR", "HV", "DTAI", "TSR", "MTR")


# ----------------------------------------------------------------- hypervolume


@dataclass(frozen=True)
class HypervolumeResult:
    value: float
    method: str  # "exact" or "monte_carlo"
    std_error: Optional[float] = None
    n_dropped: int = 0

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "method": self.method,
            "std_error": self.std_error,
            "n_dropped": self.n_dropped,
        }


def _nondominated(q: np.ndarray) -> np.ndarray:
    """Maximal rows of ``q``; of several identical rows only the first is kept."""
    k = len(q)
    if k <= 1:
        return q
    weak = np.all(q[None, :, :] >= q[:, None, :], axis=2)   # [i, j]: j weakly dominates i
    strict = np.any(q[None, :, :] > q[:, None, :], axis=2)
    earlier = np.tri(k, k, -1, dtype=bool)                  # [i, j]: j < i
    return q[~np.any(weak & (strict | earlier), axis=1)]


def _hv_2d(q: np.ndarray) -> float:
    order = np.argsort(-q[:, 0], kind="stable")
    total, y_prev = 0.0, 0.0
    for x, y in q[order].tolist():
        if y > y_prev:
            total += x * (y - y_prev)
            y_prev = y
    return total


def _hv_3d(q: np.ndarray) -> float:
    # slice along the last objective, top down
    q = q[np.argsort(-q[:, 2], kind="stable")]
    z = np.append(q[:, 2], 0.0)
    total = 0.0
    for i in range(len(q)):
        if z[i] > z[i + 1]:
            total += _hv_2d(q[: i + 1, :2]) * (z[i] - z[i + 1])
    return total


def _wfg(q: np.ndarray) -> float:
    """Volume of the union of boxes ``[0, q_i]`` for a nondominated front."""
    k, n = q.shape
    if k == 0:
        return 0.0
    if k == 1:
        return float(np.prod(q[0]))
    if n == 1:
        return float(q.max())
    if n == 2:
        return _hv_2d(q)
    if n == 3:
        return _hv_3d(q)
    q = q[np.argsort(-q[:, -1], kind="stable")]
    vols = np.prod(q, axis=1)
    total = 0.0
    for i in range(k):
        rest = q[i + 1:]
        limited = _nondominated(np.minimum(rest, q[i])) if len(rest) else rest
        total += float(vols[i]) - _wfg(limited)
    return total


def _mc_chunk(q: np.ndarray, upper: np.ndarray, size: int, seed_seq) -> int:
    rng = np.random.default_rng(seed_seq)
    u = rng.uniform(0.0, 1.0, size=(size, upper.size)) * upper
    hit = np.zeros(size, dtype=bool)
    for p in q:
        m = u[:, 0] <= p[0]
        for d in range(1, upper.size):
            m &= u[:, d] <= p[d]
        hit |= m
    return int(hit.sum())


def _hv_monte_carlo(q: np.ndarray, samples: int, seed: int, threads: int = 1):
    upper = q.max(axis=0)
    box = float(np.prod(upper))
    sizes = [min(_MC_CHUNK, samples - s) for s in range(0, samples, _MC_CHUNK)]
    # one RNG stream per chunk: the estimate does not depend on thread count
    streams = np.random.SeedSequence(seed).spawn(len(sizes))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            hits = list(pool.map(lambda a: _mc_chunk(q, upper, *a), zip(sizes, streams)))
    else:
        hits = [_mc_chunk(q, upper, n, s) for n, s in zip(sizes, streams)]
    frac = sum(hits) / samples
    return box * frac, box * np.sqrt(frac * (1.0 - frac) / samples)


def hypervolume(
    points,
    reference,
    mode: str = "auto",
    mc_samples: int = DEFAULT_MC_SAMPLES,
    seed: Optional[int] = None,
    threads: int = 1,
) -> HypervolumeResult:
    """Hypervolume dominated by ``points`` above ``reference`` (maximization).

    Points that fail to exceed the reference in every coordinate are dropped
    and counted in ``n_dropped``. ``mode="auto"`` computes the exact value
    (WFG recursion) for up to 6 objectives and 300 points and switches to a
    Monte Carlo estimate otherwise; Monte Carlo requires an explicit ``seed``.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    ref = np.atleast_1d(np.asarray(reference, dtype=float))
    if pts.size == 0:
        raise EmptyFront("no points given")
    if pts.shape[1] != ref.size:
        raise DimensionMismatch(f"points have {pts.shape[1]} objectives, reference {ref.size}")
    keep = np.all(pts > ref, axis=1)
    n_dropped = int((~keep).sum())
    if n_dropped:
        log.info("hypervolume: dropped %d point(s) not dominating the reference", n_dropped)
    if not keep.any():
        raise EmptyFront("every point fails to dominate the reference")
    q = _nondominated(pts[keep] - ref)

    if mode == "auto":
        exact = ref.size <= EXACT_MAX_DIM and len(q) <= EXACT_MAX_POINTS
        mode = "exact" if exact else "mc"
    if mode == "exact":
        return HypervolumeResult(_wfg(q), "exact", None, n_dropped)
    if mode != "mc":
        raise InvalidParameter(f"unknown hypervolume mode {mode!r}")
    if seed is None:
        raise InvalidParameter("Monte Carlo hypervolume needs an explicit seed")
    if mc_samples < 1:
        raise InvalidParameter("mc_samples must be positive")
    value, se = _hv_monte_carlo(q, int(mc_samples), seed, threads)
    return HypervolumeResult(float(value), "monte_carlo", float(se), n_dropped)


# ------------------------------------------------------- diversity / novelty


def _as_matrix(vectors, what="vectors") -> np.ndarray:
    try:
        a = np.asarray(vectors, dtype=float)
    except ValueError:
        raise DimensionMismatch(f"{what} have unequal lengths") from None
    if a.ndim == 1:
        a = a.reshape(-1, 1) if a.size else a.reshape(0, 0)
    if a.ndim != 2:
        raise DimensionMismatch(f"{what} must form a 2-D array")
    return a


def diversity_scores(vectors) -> np.ndarray:
    """Mean Euclidean distance from each vector to every other vector in the set."""
    x = _as_matrix(vectors)
    m = len(x)
    if m < 2:
        raise TooFewDesigns(f"diversity needs at least 2 designs, got {m}")
    return squareform(pdist(x)).sum(axis=1) / (m - 1)


def novelty_scores(generated, dataset, chunk: int = 2048) -> np.ndarray:
    """Distance from each generated vector to its nearest dataset vector."""
    y = _as_matrix(generated, "generated")
    x = _as_matrix(dataset, "dataset")
    if len(y) == 0 or len(x) == 0:
        raise EmptyDataset("novelty needs nonempty generated and dataset sets")
    if y.shape[1] != x.shape[1]:
        raise DimensionMismatch(f"generated width {y.shape[1]} != dataset width {x.shape[1]}")
    return np.concatenate([cdist(y[i:i + chunk], x).min(axis=1) for i in range(0, len(y), chunk)])


# --------------------------------------------------- feasibility and targets


def feasibility_rate(flags) -> float:
    flags = np.asarray(flags, dtype=bool).reshape(-1)
    if flags.size == 0:
        raise EmptyInput("no feasibility flags")
    return float(flags.mean())


def _target_inputs(p, targets: TargetSpec) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != targets.n:
        raise DimensionMismatch(f"{p.shape[-1]} performance values for {targets.n} targets")
    bad = ~(p > 0)
    if np.any(bad):
        raise NonPositiveInput(int(np.argwhere(bad)[0][-1]), "performance")
    return p


def target_success_rate(p, targets: TargetSpec):
    """Fraction of targets met or exceeded (ties count as met), per row."""
    p = _target_inputs(p, targets)
    out = np.mean(p >= targets.t, axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def minimum_target_ratio(p, targets: TargetSpec):
    """Smallest performance/target ratio over objectives, per row."""
    p = _target_inputs(p, targets)
    out = np.min(p / targets.t, axis=-1)
    return float(out) if np.ndim(out) == 0 else out


# ------------------------------------------------------------------------ KDE


@dataclass(frozen=True)
class KdeCurve:
    grid: np.ndarray
    density: np.ndarray
    bandwidth: float

    def to_dict(self) -> dict:
        return {"grid": self.grid.tolist(), "density": self.density.tolist(), "bandwidth": self.bandwidth}


def silverman_bandwidth(samples) -> float:
    x = np.asarray(samples, dtype=float)
    sigma = np.std(x, ddof=1)
    q75, q25 = np.percentile(x, [75, 25])
    spread = min(sigma, (q75 - q25) / 1.34)
    if spread <= 0:
        # heavy ties inside the interquartile range
        spread = sigma
    return 0.9 * spread * x.size ** (-0.2)


def kde(samples, grid_size: int = 512) -> KdeCurve:
    """Gaussian KDE with Silverman bandwidth on a grid over ``[min - 3h, max + 3h]``."""
    x = np.asarray(samples, dtype=float).reshape(-1)
    if grid_size < 2:
        raise InvalidParameter("grid_size must be >= 2")
    if x.size < 2 or not np.ptp(x) > 0:
        raise DegenerateSamples("KDE needs at least 2 samples with nonzero spread")
    h = silverman_bandwidth(x)
    grid = np.linspace(x.min() - 3 * h, x.max() + 3 * h, grid_size)
    density = np.zeros(grid_size)
    norm = 1.0 / (x.size * h * np.sqrt(2 * np.pi))
    for i in range(0, x.size, 4096):
        z = (grid[:, None] - x[None, i:i + 4096]) / h
        density += np.exp(-0.5 * z * z).sum(axis=1)
    return KdeCurve(grid, density * norm, float(h))


# ------------------------------------------------------------ whole-set report


@dataclass
class EvaluationReport:
    n_designs: int
    n_feasible: int
    gfr: float
    feasible_index: np.ndarray
    hv: Optional[HypervolumeResult] = None
    means: dict = field(default_factory=dict)
    per_design: dict = field(default_factory=dict)
    kde: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)
    targets: Optional[np.ndarray] = None
    reference: Optional[np.ndarray] = None

    def metric(self, name: str) -> Optional[float]:
        """Table value for ``name`` (one of :data:`TABLE_METRICS`), or None."""
        if name == "GFR":
            return self.gfr
        if name == "HV":
            return None if self.hv is None else self.hv.value
        return self.means.get(name)

    def to_dict(self) -> dict:
        return {
            "n_designs": self.n_designs,
            "n_feasible": self.n_feasible,
            "metrics": {name: self.metric(name) for name in TABLE_METRICS},
            "hypervolume": None if self.hv is None else self.hv.to_dict(),
            "feasible_index": [int(i) for i in self.feasible_index],
            "per_design": {k: np.asarray(v).tolist() for k, v in self.per_design.items()},
            "kde": {k: v.to_dict() for k, v in self.kde.items()},
            "notes": dict(self.notes),
            "targets": None if self.targets is None else np.asarray(self.targets).tolist(),
            "reference": None if self.reference is None else np.asarray(self.reference).tolist(),
        }

    def to_json(self, **extra) -> str:
        doc = self.to_dict()
        doc.update(extra)
        return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def evaluate_set(
    generated: DesignSet,
    targets: TargetSpec,
    reference,
    dataset: DesignSet,
    standardize: bool = False,
    hv_mode: str = "auto",
    mc_samples: int = DEFAULT_MC_SAMPLES,
    seed: Optional[int] = 0,
    threads: int = 1,
    kde_grid: int = 512,
) -> EvaluationReport:
    """Score a generated set against targets, a reference point and its source data.

    GFR is computed over the whole set; every other metric over its feasible
    subset only. Metrics that cannot be computed (too few designs, nothing
    feasible) are absent from ``means`` and carry an error code in ``notes``.
    """
    if generated.feasible is None:
        raise NoPerformance("feasibility flags must be attached to the generated set")
    if generated.performance is None or not generated.adjusted:
        raise NoPerformance("adjusted performance must be attached to the generated set")
    gfr = feasibility_rate(generated.feasible)
    idx = np.flatnonzero(generated.feasible)
    report = EvaluationReport(
        n_designs=len(generated), n_feasible=int(idx.size), gfr=gfr, feasible_index=idx,
        targets=np.asarray(targets.t), reference=np.asarray(reference, dtype=float),
    )
    if idx.size == 0:
        for name in ("HV",) + PER_DESIGN_METRICS:
            report.notes[name] = NoFeasibleDesigns.__name__
        return report

    feas = generated.take(idx)
    perf = feas.performance
    standardizer = Standardizer.fit(dataset) if standardize else None

    try:
        report.hv = hypervolume(perf, reference, hv_mode, mc_samples, seed, threads)
    except EmptyFront as exc:
        report.notes["HV"] = exc.code

    scores = {}
    try:
        scores["DSD"] = diversity_scores(encode_set(feas, standardizer))
        scores["PSD"] = diversity_scores(perf)
    except TooFewDesigns as exc:
        report.notes["DSD"] = report.notes["PSD"] = exc.code
    scores["DN"] = novelty_scores(encode_set(feas, standardizer), encode_set(dataset, standardizer))
    scores["DTAI"] = dtai_scores(perf, targets)
    scores["TSR"] = np.atleast_1d(target_success_rate(perf, targets))
    scores["MTR"] = np.atleast_1d(minimum_target_ratio(perf, targets))

    for name in PER_DESIGN_METRICS:
        if name not in scores:
            continue
        values = np.asarray(scores[name], dtype=float)
        report.per_design[name] = values
        report.means[name] = float(values.mean())
        try:
            report.kde[name] = kde(values, kde_grid)
        except DtaiError as exc:
            report.notes.setdefault(f"KDE_{name}", exc.code)
    return report
