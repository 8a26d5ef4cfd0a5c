"""Linear-programming solvers: feasibility, literal bounds, L1 relaxation."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..constraints import LinearSystem
from ..model import JointDistribution, Literal, SolveMode, conj_mask, entropy_bits
from .base import InfeasibleError, SolveResult, SolverConfig
from .simplex import find_feasible, simplex


def solve_lp(system: LinearSystem, mode: SolveMode | None = None) -> SolveResult:
    """A vertex of the feasible polytope, or a non-converged result if empty."""
    mode = mode or SolveMode("owa", False, "lp")
    lp = find_feasible(system.a, system.b)
    k = system.n_worlds
    if lp.status != "optimal":
        uniform = np.full(k, 1.0 / k)
        dist = JointDistribution(uniform, system.residual(uniform), mode)
        return SolveResult(dist, False, lp.iterations, lp.infeasibility, "infeasible")
    dist = JointDistribution.from_raw(lp.x, system.residual(lp.x), mode)
    return SolveResult(dist, True, lp.iterations, entropy_bits(dist.probs), "ok", lp.x)


def is_feasible(system: LinearSystem) -> bool:
    return find_feasible(system.a, system.b).status == "optimal"


def optimize_bounds(system: LinearSystem, target: Sequence[Literal], sense: str = "max") -> float:
    """Extreme value of Pr(target) over all distributions satisfying the system."""
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    k = system.n_worlds
    n = k.bit_length() - 1
    c = conj_mask(n, target).astype(float)
    if sense == "max":
        c = -c
    res = simplex(c, system.a, system.b)
    if res.status != "optimal":
        raise InfeasibleError("the constraint system has no solution")
    return float(abs(res.value)) if sense == "max" else float(res.value)


def solve_l1_relaxed(system: LinearSystem, config: SolverConfig = SolverConfig(), mode: SolveMode | None = None) -> SolveResult:
    """Distribution minimizing sum_i |a_i pi - b_i| over all rule rows.

    The normalization row stays a hard constraint.  Each relaxed row i gets a
    bound variable s_i and two surplus variables so that the LP is in
    equality form: ``a_i pi - s_i + u_i = b_i`` and ``a_i pi + s_i - v_i = b_i``.
    """
    mode = mode or SolveMode("owa", False, "l1")
    k = system.n_worlds
    soft = [i for i, tag in enumerate(system.row_tags) if tag != "normalization"]
    r = len(soft)
    a_soft = system.a[soft, :k]
    b_soft = system.b[soft]
    nvar = k + 3 * r
    rows = np.zeros((2 * r + 1, nvar))
    rhs = np.zeros(2 * r + 1)
    eye = np.eye(r)
    rows[:r, :k] = a_soft
    rows[:r, k : k + r] = -eye
    rows[:r, k + r : k + 2 * r] = eye
    rows[r : 2 * r, :k] = a_soft
    rows[r : 2 * r, k : k + r] = eye
    rows[r : 2 * r, k + 2 * r :] = -eye
    rhs[: 2 * r] = np.concatenate([b_soft, b_soft])
    rows[-1, :k] = 1.0
    rhs[-1] = 1.0
    c = np.zeros(nvar)
    c[k : k + r] = 1.0
    res = simplex(c, rows, rhs)
    pi = res.x[:k]
    dist = JointDistribution.from_raw(pi, system.residual(pi), mode)
    return SolveResult(dist, True, res.iterations, float(res.value), "ok", pi)
