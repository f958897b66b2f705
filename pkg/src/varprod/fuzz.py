"""Seeded random verification of the product bounds.

Trial ``i`` of a run draws everything from ``trial_rng(seed, i)``, so any
trial can be replayed on its own with :func:`draw_trial`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import bounds, linalg
from .observables import MomentTable, moment_table, random_observables
from .states import DensityMatrix, random_mixed, random_pure, trial_rng

# Check name -> tolerance; the scale used is given in ``_check_values``.
CHECK_TOLERANCES = {
    "nonnegativity": 1e-10,
    "gram_psd": 1e-10,
    "cycles_vs_det": 1e-9,
    "schrodinger_pair_vs_det": 1e-12,
    "theorem1_vs_det": 1e-11,
    "commutator_form_vs_det": 1e-11,
    "schrodinger_triple_dominance": 1e-11,
    "sum_amgm": 1e-11,
}

MAX_CYCLE_CHECK_N = 6


@dataclass(frozen=True)
class Trial:
    index: int
    dim: int
    n: int
    pure: bool
    rho: DensityMatrix
    table: MomentTable


def draw_trial(seed: int, index: int, dim: int, n: int) -> Trial:
    """Random state (pure with probability 1/2, else full-rank Ginibre) and
    ``n`` random Hermitian observables."""
    rng = trial_rng(seed, index)
    pure = bool(rng.random() < 0.5)
    rho = random_pure(dim, rng) if pure else random_mixed(dim, dim, rng)
    obs = random_observables(dim, n, rng)
    return Trial(index, dim, n, pure, rho, moment_table(rho, obs))


def _check_values(t: MomentTable, tol: float) -> dict[str, tuple[float, float]]:
    """Per check: (margin, allowed). A check passes when margin <= allowed."""
    product = t.product
    det_bound = bounds.gram_det_bound(t)
    scale = max(1.0, abs(det_bound))
    out = {
        "nonnegativity": (det_bound - product, tol * max(1.0, product)),
        "gram_psd": (-float(linalg.hermitian_eigenvalues(t.gram)[0]), CHECK_TOLERANCES["gram_psd"]),
        "sum_amgm": (
            bounds.sum_amgm_bound(t) - float(np.sum(t.variances)),
            CHECK_TOLERANCES["sum_amgm"],
        ),
    }
    if t.n <= MAX_CYCLE_CHECK_N:
        out["cycles_vs_det"] = (
            abs(bounds.theorem2_bound_cycles(t) - det_bound),
            CHECK_TOLERANCES["cycles_vs_det"] * scale,
        )
    if t.n == 2:
        out["schrodinger_pair_vs_det"] = (
            abs(bounds.schrodinger_pair_bound(t, 0, 1) - det_bound),
            CHECK_TOLERANCES["schrodinger_pair_vs_det"] * scale,
        )
    if t.n == 3:
        t1 = bounds.theorem1_bound(t)
        out["theorem1_vs_det"] = (abs(t1 - det_bound), CHECK_TOLERANCES["theorem1_vs_det"] * scale)
        out["commutator_form_vs_det"] = (
            abs(bounds.theorem1_bound_commutator_form(t) - det_bound),
            CHECK_TOLERANCES["commutator_form_vs_det"] * scale,
        )
        out["schrodinger_triple_dominance"] = (
            bounds.schrodinger_triple_bound(t) - t1,
            CHECK_TOLERANCES["schrodinger_triple_dominance"],
        )
    return out


@dataclass
class _CheckStats:
    evaluated: int = 0
    violations: int = 0
    worst_margin: float = -math.inf
    worst_allowed: float = 0.0
    worst_trial: dict = field(default_factory=dict)

    def update(self, margin: float, allowed: float, where: dict) -> None:
        self.evaluated += 1
        if margin > allowed:
            self.violations += 1
        if margin - allowed > self.worst_margin - self.worst_allowed:
            self.worst_margin, self.worst_allowed, self.worst_trial = margin, allowed, where

    def as_dict(self) -> dict:
        return {
            "evaluated": self.evaluated,
            "violations": self.violations,
            "worst_margin": self.worst_margin,
            "worst_allowed": self.worst_allowed,
            "worst_trial": self.worst_trial,
            "pass": self.violations == 0,
        }


def run_fuzz(
    seed: int,
    trials: int,
    dims: Sequence[int],
    n_obs: Sequence[int],
    tol: float = 1e-10,
) -> dict:
    """Run ``trials`` draws for every (dim, n) pair and summarize.

    The trial index counts across all pairs, so ``(seed, index, dim, n)`` in
    a worst-case entry replays it exactly.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if any(d < 2 for d in dims):
        raise ValueError("dims must all be >= 2")
    stats: dict[str, _CheckStats] = {}
    worst_gap = {"gap": math.inf}
    min_gram_eig = math.inf
    index = 0
    for dim in dims:
        for n in n_obs:
            for _ in range(trials):
                trial = draw_trial(seed, index, dim, n)
                where = {"seed": seed, "index": index, "dim": dim, "n": n}
                checks = _check_values(trial.table, tol)
                for name, (margin, allowed) in checks.items():
                    stats.setdefault(name, _CheckStats()).update(margin, allowed, where)
                min_gram_eig = min(min_gram_eig, -checks["gram_psd"][0])
                gap = trial.table.product - bounds.gram_det_bound(trial.table)
                if gap < worst_gap["gap"]:
                    worst_gap = {"gap": gap, **where}
                index += 1
    checks_out = {name: s.as_dict() for name, s in sorted(stats.items())}
    return {
        "config": {"seed": seed, "trials": trials, "dims": list(dims), "n_obs": list(n_obs), "tol": tol},
        "total_trials": index,
        "checks": checks_out,
        "worst_gap": worst_gap,
        "min_gram_eigenvalue": min_gram_eig,
        "pass": all(c["pass"] for c in checks_out.values()),
    }
