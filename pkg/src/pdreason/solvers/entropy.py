"""Linear-entropy maximization.

Linear entropy replaces log(x) by x - 1 in the entropy integrand, so the
most spread-out distribution becomes the feasible point of smallest squared
norm.  Its stationarity conditions form a square linear system (see
``build_lagrange_augmented``) whose solution is ``pi = A^T lam``.  When that
point has negative coordinates, the constrained optimum over
``{A pi = B, pi >= 0}`` is found instead.
"""

from __future__ import annotations

import numpy as np

from ..constraints import LinearSystem, build_lagrange_augmented
from ..model import JointDistribution, SolveMode, entropy_bits
from .base import SingularSystemError, SolveResult, SolverConfig
from .direct import BOX_TOL, solve_direct
from .sgd import solve_sgd


def min_norm_nonneg(a: np.ndarray, b: np.ndarray, max_iter: int = 500, tol: float = 1e-12):
    """Smallest-norm x with ``a x = b`` and ``x >= 0``.

    The optimum has the form ``x = max(0, a^T lam)``.  ``lam`` minimizes the
    convex dual ``0.5 |max(0, a^T lam)|^2 - b.lam``, which is done with a
    semismooth Newton method and backtracking.  Returns ``(x, converged)``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    m = a.shape[0]
    lam = np.linalg.lstsq(a @ a.T, b, rcond=None)[0]

    def dual(l):
        z = np.maximum(a.T @ l, 0.0)
        return 0.5 * z @ z - b @ l

    for _ in range(max_iter):
        x = np.maximum(a.T @ lam, 0.0)
        grad = a @ x - b
        if np.abs(grad).max(initial=0.0) <= tol:
            return x, True
        active = (a.T @ lam) > 0
        sub = a[:, active]
        h = sub @ sub.T + 1e-12 * np.eye(m)
        d = -np.linalg.lstsq(h, grad, rcond=None)[0]
        slope = grad @ d
        if slope > -1e-18:
            d, slope = -grad, -(grad @ grad)
        f0, t = dual(lam), 1.0
        while dual(lam + t * d) > f0 + 1e-4 * t * slope and t > 1e-12:
            t *= 0.5
        lam = lam + t * d
    x = np.maximum(a.T @ lam, 0.0)
    return x, bool(np.abs(a @ x - b).max(initial=0.0) <= 1e-8)


def solve_max_linear_entropy(
    system: LinearSystem,
    config: SolverConfig = SolverConfig(),
    backend: str = "direct",
    mode: SolveMode | None = None,
) -> SolveResult:
    if system.augmented:
        raise ValueError("pass the plain system; the stationarity system is built here")
    mode = mode or SolveMode("owa", True, backend)
    aug = build_lagrange_augmented(system)
    k = system.n_worlds
    if backend == "direct":
        try:
            res = solve_direct(aug, tol=1e-6, mode=mode)
            x = res.solution
            ok = True
        except SingularSystemError:
            x, ok = np.full(aug.a.shape[1], np.nan), False
        epochs = 1
    elif backend == "sgd":
        res = solve_sgd(aug, config, mode=mode)
        x, ok, epochs = res.solution, res.converged, res.epochs_used
    else:
        raise ValueError(f"unknown entropy backend {backend!r}")

    pi = x[:k]
    status = "ok"
    if not ok or np.isnan(pi).any() or pi.min() < -BOX_TOL:
        pi, ok = min_norm_nonneg(system.a, system.b)
        status = "box-fallback" if ok else "not-converged"
        x = np.concatenate([pi, np.zeros(aug.a.shape[1] - k)])
    residual = system.residual(pi)
    dist = JointDistribution.from_raw(pi, residual, mode)
    tol = 1e-6 if backend == "direct" else config.tol
    converged = bool(ok and residual <= max(tol, 1e-6))
    return SolveResult(dist, converged, epochs, entropy_bits(dist.probs), status, x)
