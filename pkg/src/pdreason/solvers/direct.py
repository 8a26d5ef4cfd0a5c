"""Direct dense solve of a linear system for a world distribution."""

from __future__ import annotations

import numpy as np

from ..constraints import LinearSystem
from ..model import JointDistribution, SolveMode
from .base import SingularSystemError, SolveResult
from .linalg import gaussian_solve

BOX_TOL = 1e-9


def _as_result(system: LinearSystem, x: np.ndarray, mode: SolveMode, tol: float) -> SolveResult:
    k = system.n_worlds
    pi = x[:k]
    in_box = pi.min() >= -BOX_TOL and pi.max() <= 1 + BOX_TOL
    residual = system.residual(x)
    dist = JointDistribution.from_raw(pi, residual, mode)
    converged = bool(in_box and residual <= tol)
    status = "ok" if in_box else "box-violation"
    return SolveResult(dist, converged, 1, None, status, x)


def solve_direct(system: LinearSystem, tol: float = 1e-6, mode: SolveMode | None = None) -> SolveResult:
    """Gaussian elimination; least squares via normal equations when not square.

    Raises SingularSystemError when the system is singular and inconsistent.
    A solution outside [0, 1] is returned with ``converged=False`` and status
    ``box-violation``; its distribution is the clipped, renormalized vector.
    """
    mode = mode or SolveMode("owa", system.augmented, "direct")
    a, b = system.a, system.b
    if a.shape[0] == a.shape[1]:
        res = gaussian_solve(a, b)
    else:
        res = gaussian_solve(a.T @ a, a.T @ b)
    if not res.consistent:
        raise SingularSystemError(f"singular system of rank {res.rank} with no consistent solution")
    return _as_result(system, res.x, mode, tol)
