"""Gradient descent with momentum on the squared row residuals."""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..constraints import LinearSystem
from ..model import JointDistribution, SolveMode
from .base import SolveResult, SolverConfig


def spectral_norm_sq(a: np.ndarray, iters: int = 50, seed: int = 0) -> float:
    """Power-iteration estimate of the largest eigenvalue of A^T A."""
    if a.size == 0:
        return 0.0
    v = np.random.default_rng(seed).random(a.shape[1]) + 0.1
    est = 0.0
    for _ in range(iters):
        w = a.T @ (a @ v)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        est = norm / np.linalg.norm(v)
        v = w / norm
    return float(est)


def step_size(system: LinearSystem, config: SolverConfig) -> float:
    """Default 1 / 2^n, shrunk when the system's curvature would make it unstable."""
    if config.learning_rate is not None:
        return config.learning_rate
    lr = 1.0 / system.n_worlds
    curv = 1.05 * spectral_norm_sq(system.a)
    return min(lr, 1.0 / curv) if curv > 0 else lr


def solve_sgd(
    system: LinearSystem,
    config: SolverConfig = SolverConfig(),
    init: Optional[np.ndarray] = None,
    mode: SolveMode | None = None,
) -> SolveResult:
    """Minimize sum_i (a_i x - b_i)^2 with heavy-ball momentum.

    Each epoch shuffles the rows with a generator seeded by ``config.seed``
    and splits them into batches of ``config.batch_size`` rows (default: one
    batch holding every row).  Per batch the step is
    ``dx = -lr * 2 A_b^T (A_b x - b_b) + momentum * dx_prev``.  World
    coordinates are clipped to [0, 1] after each step; multipliers of an
    augmented system stay free.  Stops once the max row residual is below
    ``tol``.  World coordinates start uniform unless ``init`` is given.
    """
    mode = mode or SolveMode("owa", system.augmented, "sgd")
    a, b = system.a, system.b
    m, k = a.shape
    nw = system.n_worlds
    lr = step_size(system, config)
    batch = m if config.batch_size is None else min(config.batch_size, m)
    x = np.zeros(k)
    x[:nw] = 1.0 / nw
    if init is not None:
        x[: len(init)] = init
    velocity = np.zeros(k)
    rng = np.random.default_rng(config.seed)
    best_x, best_res = x.copy(), system.residual(x)
    epochs = 0
    converged = best_res < config.tol
    while not converged and epochs < config.max_epochs:
        epochs += 1
        order = rng.permutation(m)
        for start in range(0, m, batch):
            idx = order[start : start + batch]
            ab = a[idx]
            prev = x.copy()
            x -= 2.0 * lr * (ab.T @ (ab @ x - b[idx]))
            x += config.momentum * velocity
            if config.clip:
                np.clip(x[:nw], 0.0, 1.0, out=x[:nw])
            velocity = x - prev
        if not np.all(np.isfinite(x)):
            break
        res = system.residual(x)
        if res < best_res:
            best_x, best_res = x.copy(), res
        converged = res < config.tol
    dist = JointDistribution.from_raw(best_x[:nw], best_res, mode)
    return SolveResult(dist, bool(converged), epochs, None, "ok" if converged else "not-converged", best_x)
