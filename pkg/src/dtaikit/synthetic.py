"""A small analytic stand-in for a mixed-type frame design dataset.

Five continuous dimensions (three tube lengths, a wall thickness and a
junction offset) plus one categorical material column. Continuous columns are
bimodal, as real community-designed frames tend to be. Four raw objectives
with closed-form Jacobians:

========== =================== ======================================
column     direction           form
========== =================== ======================================
stiffness  maximize            ``g_m * exp(-|x - c1|^2 / 2) + 0.05``
mass       minimize magnitude  ``rho_m * sum(softplus(2 x)) / 2``
deflection minimize magnitude  ``-(0.1 + |x - c3|^2 / 2) / E_m``
safety     maximize            ``1 + 2 s_m / (1 + |x - c4|^2)``
========== =================== ======================================
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch
from .feasibility import FeasibilityRule, check_set
from .model import ColumnSchema, DesignSet, Direction, ObjectiveSpec, adjust_performance
from .optimize import BenchmarkProblem

CONTINUOUS = ("seat_tube", "top_tube", "down_tube", "wall_thickness", "junction_offset")
MATERIALS = ("steel", "aluminum", "titanium")

SCHEMA = tuple(ColumnSchema(name) for name in CONTINUOUS) + (
    ColumnSchema.categorical("material", MATERIALS),
)
OBJECTIVES = (
    ObjectiveSpec("stiffness", Direction.MAXIMIZE),
    ObjectiveSpec("mass", Direction.MINIMIZE_MAGNITUDE),
    ObjectiveSpec("deflection", Direction.MINIMIZE_MAGNITUDE),
    ObjectiveSpec("safety", Direction.MAXIMIZE),
)
RULES = tuple(
    FeasibilityRule("non_negative", f"nonneg {name}", {"column": name}) for name in CONTINUOUS
) + (
    FeasibilityRule("triangle_inequality", "main triangle",
                    {"a": "seat_tube", "b": "top_tube", "c": "down_tube"}),
)

# per-material (stiffness gain, density, modulus, strength)
_MATERIAL = np.array([
    [1.0, 1.0, 1.0, 1.0],
    [0.8, 0.5, 0.7, 0.9],
    [0.9, 0.6, 0.9, 1.2],
])
_C1 = np.array([1.1, 0.9, 1.0, 1.2, 0.8])
_C3 = np.array([0.9, 1.1, 1.1, 0.8, 1.0])
_C4 = np.array([1.0, 1.0, 0.8, 1.1, 1.2])
_MODES = (0.6, 1.4)
_MODE_SD = 0.12


def _softplus(z):
    return np.logaddexp(0.0, z)


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def raw_objectives(values, labels, jacobian: bool = False):
    """Raw objective values ``(m, 4)`` and optionally their Jacobian ``(m, 4, 5)``."""
    X = np.atleast_2d(np.asarray(values, dtype=float))
    lab = np.asarray(labels, dtype=np.int64).reshape(-1)
    if X.shape[1] != len(CONTINUOUS) or lab.size != len(X):
        raise DimensionMismatch("values must be (m, 5) with one material label per row")
    gain, rho, modulus, strength = _MATERIAL[lab].T

    d1 = X - _C1
    bump = np.exp(-0.5 * np.sum(d1 * d1, axis=1))
    stiffness = gain * bump + 0.05
    mass = rho * 0.5 * np.sum(_softplus(2 * X), axis=1)
    d3 = X - _C3
    deflection = -(0.1 + 0.5 * np.sum(d3 * d3, axis=1)) / modulus
    d4 = X - _C4
    q4 = 1.0 + np.sum(d4 * d4, axis=1)
    safety = 1.0 + 2.0 * strength / q4
    F = np.column_stack([stiffness, mass, deflection, safety])
    if not jacobian:
        return F, None
    J = np.empty((len(X), 4, X.shape[1]))
    J[:, 0] = -(gain * bump)[:, None] * d1
    J[:, 1] = rho[:, None] * _sigmoid(2 * X)
    J[:, 2] = -d3 / modulus[:, None]
    J[:, 3] = -(4.0 * strength / q4**2)[:, None] * d4
    return F, J


def adjusted_objectives(values, labels, jacobian: bool = False):
    """Adjusted (positive, maximized) objectives with the chain-rule Jacobian."""
    F, J = raw_objectives(values, labels, jacobian)
    P = adjust_performance(F, OBJECTIVES)
    if not jacobian:
        return P, None
    scale = np.ones_like(P)
    for k, spec in enumerate(OBJECTIVES):
        if spec.direction is Direction.MINIMIZE_MAGNITUDE:
            # d/dF of 1 / (|F| + eps)
            scale[:, k] = -np.sign(F[:, k]) * P[:, k] ** 2
    return P, J * scale[:, :, None]


def evaluate_set(dataset: DesignSet) -> np.ndarray:
    """Raw objective matrix for any set using this schema."""
    F, _ = raw_objectives(dataset.values, dataset.labels[:, 0])
    return F


def make_dataset(count: int = 5000, seed: int = 2022) -> DesignSet:
    """Draw ``count`` feasible designs; raw objectives attached, unadjusted."""
    rng = np.random.default_rng(seed)
    chunks, labels, have = [], [], 0
    while have < count:
        n = 2 * (count - have) + 16
        modes = np.asarray(_MODES)[rng.integers(0, 2, size=(n, len(CONTINUOUS)))]
        X = modes + _MODE_SD * rng.standard_normal((n, len(CONTINUOUS)))
        lab = rng.choice(len(MATERIALS), size=n, p=[0.5, 0.35, 0.15])
        ok = check_set(DesignSet(SCHEMA, X, lab.reshape(-1, 1)), RULES)
        chunks.append(X[ok])
        labels.append(lab[ok])
        have += int(ok.sum())
    X = np.vstack(chunks)[:count]
    lab = np.concatenate(labels)[:count].reshape(-1, 1)
    F, _ = raw_objectives(X, lab[:, 0])
    return DesignSet(SCHEMA, X, lab, performance=F,
                     objective_names=tuple(o.name for o in OBJECTIVES), adjusted=False)


def problem_for(labels, bounds) -> BenchmarkProblem:
    """Benchmark problem over the continuous columns with materials held fixed.

    ``labels`` gives one material per population member; every population
    passed to ``evaluate`` must have exactly that many rows.
    """
    lab = np.asarray(labels, dtype=np.int64).reshape(-1)
    bounds = np.asarray(bounds, dtype=float)

    def evaluate(X, jacobian=True):
        return adjusted_objectives(X, lab, jacobian)

    return BenchmarkProblem("synthetic_frames", len(CONTINUOUS), len(OBJECTIVES), bounds, evaluate)
