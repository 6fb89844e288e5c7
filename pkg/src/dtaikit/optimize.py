"""Gradient ascent of DTAI through differentiable benchmark problems.

A :class:`BenchmarkProblem` maps a population of design vectors to adjusted
performance and its Jacobian. :func:`ascend_dtai` pushes every member along
``J^T dDTAI/dp`` with box projection and per-member backtracking, so each
member's DTAI never decreases.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .dtai import dtai_scores
from .errors import DimensionMismatch, InvalidDimension, InvalidParameter
from .metrics import EvaluationReport, evaluate_set, minimum_target_ratio, target_success_rate
from .model import ColumnSchema, DesignSet, TargetSpec, percentile_reference

MAX_HALVINGS = 20
STALL_WINDOW = 10


@dataclass(frozen=True)
class BenchmarkProblem:
    """Differentiable multi-objective test problem.

    ``evaluate(X, jacobian=True)`` takes an ``(m, dim)`` population and returns
    adjusted performance ``(m, n_obj)`` and, if requested, the Jacobian
    ``(m, n_obj, dim)`` (``None`` otherwise).
    """

    name: str
    dim: int
    n_obj: int
    bounds: np.ndarray
    evaluate: Callable = field(repr=False)

    def __call__(self, x):
        p, jac = self.evaluate(np.atleast_2d(x), True)
        return p[0], jac[0]

    def clip(self, X: np.ndarray) -> np.ndarray:
        return np.clip(X, self.bounds[:, 0], self.bounds[:, 1])

    def in_bounds(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        return np.all((X >= self.bounds[:, 0]) & (X <= self.bounds[:, 1]), axis=1)

    def sample(self, count: int, seed: int) -> np.ndarray:
        rng = np.random.default_rng(seed)
        return rng.uniform(self.bounds[:, 0], self.bounds[:, 1], size=(count, self.dim))


def gaussian_peaks_problem(d: int, n_obj: int, seed: int) -> BenchmarkProblem:
    """``n_obj`` Gaussian bumps ``exp(-|x - c_k|^2) + 0.1`` on ``[0, 1]^d``.

    Centers are drawn once from ``seed``; distinct centers make the objectives
    compete.
    """
    if int(d) < 1 or int(n_obj) < 1:
        raise InvalidDimension(f"need d >= 1 and n_obj >= 1, got d={d}, n_obj={n_obj}")
    d, n_obj = int(d), int(n_obj)
    centers = np.random.default_rng(seed).uniform(0.0, 1.0, size=(n_obj, d))

    def evaluate(X, jacobian=True):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        diff = X[:, None, :] - centers[None, :, :]          # (m, n_obj, d)
        bump = np.exp(-np.sum(diff * diff, axis=2))          # (m, n_obj)
        P = bump + 0.1
        return P, (-2.0 * diff * bump[:, :, None] if jacobian else None)

    bounds = np.tile([0.0, 1.0], (d, 1))
    problem = BenchmarkProblem("gaussian_peaks", d, n_obj, bounds, evaluate)
    object.__setattr__(problem, "centers", centers)
    return problem


@dataclass(frozen=True)
class OptimizerConfig:
    step_size: float = 0.5
    max_iters: int = 500
    population: int = 64
    seed: int = 0
    tolerance: float = 1e-9

    def __post_init__(self):
        if not (self.step_size > 0 and self.max_iters > 0 and self.population > 0 and self.tolerance > 0):
            raise InvalidParameter("step_size, max_iters, population and tolerance must be positive")
        if self.seed < 0:
            raise InvalidParameter("seed must be non-negative")


@dataclass
class Trajectory:
    populations: list           # (m, dim) arrays, index 0 is the start
    dtai: np.ndarray            # (iterations + 1, m)
    mean_dtai: np.ndarray
    mean_tsr: np.ndarray
    mean_mtr: np.ndarray
    converged: bool = False

    @property
    def iterations(self) -> int:
        return len(self.populations) - 1

    @property
    def initial(self) -> np.ndarray:
        return self.populations[0]

    @property
    def final(self) -> np.ndarray:
        return self.populations[-1]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["iteration", "mean_dtai", "mean_tsr", "mean_mtr"])
            for it in range(len(self.mean_dtai)):
                w.writerow([it, repr(float(self.mean_dtai[it])), repr(float(self.mean_tsr[it])),
                            repr(float(self.mean_mtr[it]))])


def ascend_dtai(
    problem: BenchmarkProblem,
    targets: TargetSpec,
    config: OptimizerConfig,
    initial: Optional[np.ndarray] = None,
    printed_sign: bool = False,
) -> Trajectory:
    """Projected gradient ascent of per-member DTAI with backtracking.

    Each iteration tries ``clip(x + eta * J^T grad)`` starting from
    ``eta = step_size`` and halves ``eta`` (up to 20 times) for members whose
    DTAI would drop; members with no acceptable step stay put. Stops after
    ``max_iters`` or once mean DTAI gains less than ``tolerance`` over 10
    iterations. ``initial`` overrides the uniform random start population.
    """
    if targets.n != problem.n_obj:
        raise DimensionMismatch(f"{targets.n} targets for {problem.n_obj} objectives")
    if initial is None:
        X = problem.sample(config.population, config.seed)
    else:
        X = problem.clip(np.atleast_2d(np.asarray(initial, dtype=float)))
        if X.shape[1] != problem.dim:
            raise DimensionMismatch(f"initial population width {X.shape[1]} != dim {problem.dim}")

    P, J = problem.evaluate(X, True)
    v, g = dtai_scores(P, targets, printed_sign, with_grad=True)
    populations, history = [X], [v]
    tsr = [float(np.mean(target_success_rate(P, targets)))]
    mtr = [float(np.mean(minimum_target_ratio(P, targets)))]
    converged = False

    for it in range(config.max_iters):
        direction = np.einsum("mn,mnd->md", g, J)
        eta = np.full(len(X), float(config.step_size))
        pending = np.ones(len(X), dtype=bool)
        X_new, P_new, v_new = X.copy(), P.copy(), v.copy()
        for _ in range(MAX_HALVINGS + 1):
            trial = problem.clip(X + eta[:, None] * direction)
            P_t, _ = problem.evaluate(trial, False)
            v_t = dtai_scores(P_t, targets, printed_sign)
            ok = pending & (v_t >= v)
            X_new[ok], P_new[ok], v_new[ok] = trial[ok], P_t[ok], v_t[ok]
            pending &= ~ok
            if not pending.any():
                break
            eta[pending] *= 0.5

        X = X_new
        P, J = problem.evaluate(X, True)
        _, g = dtai_scores(P, targets, printed_sign, with_grad=True)
        v = v_new
        populations.append(X)
        history.append(v)
        tsr.append(float(np.mean(target_success_rate(P, targets))))
        mtr.append(float(np.mean(minimum_target_ratio(P, targets))))
        if len(history) > STALL_WINDOW:
            gain = history[-1].mean() - history[-1 - STALL_WINDOW].mean()
            if gain < config.tolerance:
                converged = True
                break

    dtai_hist = np.vstack(history)
    return Trajectory(populations, dtai_hist, dtai_hist.mean(axis=1), np.array(tsr), np.array(mtr), converged)


def population_set(problem: BenchmarkProblem, X: np.ndarray) -> DesignSet:
    """Wrap a population as a design set with performance and bounds-feasibility."""
    X = np.atleast_2d(X)
    P, _ = problem.evaluate(X, False)
    schema = tuple(ColumnSchema(f"x{i}") for i in range(problem.dim))
    names = tuple(f"f{k}" for k in range(problem.n_obj))
    return DesignSet(schema, X, performance=P, feasible=problem.in_bounds(X),
                     objective_names=names, adjusted=True)


def evaluate_trajectory(
    trajectory: Trajectory,
    problem: BenchmarkProblem,
    targets: TargetSpec,
    **evaluate_kwargs,
) -> EvaluationReport:
    """Score the final population; novelty and HV reference come from the start population."""
    start = population_set(problem, trajectory.initial)
    final = population_set(problem, trajectory.final)
    reference = percentile_reference(start, 1)
    return evaluate_set(final, targets, reference, start, **evaluate_kwargs)


def sample_targets(problem: BenchmarkProblem, q: float = 75, count: int = 10_000, seed: int = 0,
                   alpha=None, beta=None) -> TargetSpec:
    """Targets at the ``q``-th percentile of a uniform random sample of the problem."""
    P, _ = problem.evaluate(problem.sample(count, seed), False)
    return TargetSpec(np.percentile(P, q, axis=0, method="linear"), alpha, beta)


def grid_achievable(problem: BenchmarkProblem, targets: TargetSpec, resolution: float = 1e-3,
                    chunk: int = 200_000) -> bool:
    """Brute-force check that some grid point over the bounds meets every target."""
    if problem.dim > 3:
        raise InvalidDimension("grid search is limited to dim <= 3")
    steps = [int(round((hi - lo) / resolution)) + 1 for lo, hi in problem.bounds]
    axes = [np.linspace(lo, hi, n) for (lo, hi), n in zip(problem.bounds, steps)]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, problem.dim)
    for i in range(0, len(mesh), chunk):
        P, _ = problem.evaluate(mesh[i:i + chunk], False)
        if np.any(np.all(P >= targets.t, axis=1)):
            return True
    return False
