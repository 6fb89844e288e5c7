"""
Scoring a design against performance targets
============================================

DTAI combines per-objective scores into one number in ``[0, 1]``. Below its
target an objective loses ``alpha`` per unit of ratio; above it, the reward
saturates at ``alpha / beta``. This script walks one objective across the
target and then shows how ``alpha`` and ``beta`` shape a three-objective score.
"""

import numpy as np

from dtaikit import dtai_scores, objective_score
from dtaikit.dtai import dtai
from dtaikit.model import TargetSpec

# %%
# One objective, target 1. The score is linear below the target and bends
# over above it; ``beta`` sets how quickly the reward saturates.
for r in (0.25, 0.5, 0.9, 1.0, 1.1, 1.5, 3.0):
    row = "  ".join(f"beta={b}: {objective_score(r, 1.0, b):+.4f}" for b in (1, 4, 10))
    print(f"r={r:<5} {row}")

# %%
# Three objectives. Doubling ``alpha`` for the second objective makes its
# shortfall cost twice as much.
targets = TargetSpec([10.0, 2.0, 0.5], alpha=[1.0, 2.0, 1.0], beta=[4.0, 4.0, 4.0])
for p in ([10.0, 2.0, 0.5], [12.0, 1.6, 0.6], [9.0, 2.4, 0.5]):
    out = dtai(p, targets)
    print(f"p={p}  r={np.round(out.r, 3)}  DTAI={out.dtai:.4f}  grad={np.round(out.grad_p, 4)}")

# %%
# A population at once. Every design exactly on target scores
# sum(alpha) / (sum(alpha) + sum(alpha / beta)), here 0.8.
rng = np.random.default_rng(0)
P = targets.t * rng.uniform(0.5, 1.5, (5, 3))
print("batch DTAI:", np.round(dtai_scores(P, targets), 4))
print("on-target DTAI:", dtai_scores(targets.t[None, :], targets)[0])
