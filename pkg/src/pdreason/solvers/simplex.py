"""Two-phase tableau simplex with Bland's anti-cycling rule.

Solves ``min c.x  s.t.  A x = b, x >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: Optional[np.ndarray]
    value: float
    iterations: int = 0
    infeasibility: float = 0.0  # phase-one optimum, sum of artificial values


class _Tableau:
    """Dense tableau; the last row holds reduced costs, the last column the rhs.

    Pricing is Dantzig's (most negative reduced cost).  After ``stall``
    consecutive degenerate pivots it switches to Bland's rule, which cannot
    cycle, and back once the objective moves again.  Every ``refresh``
    pivots the tableau is rebuilt from the original data and the current
    basis to stop rounding errors from piling up.
    """

    def __init__(self, t: np.ndarray, basis: list[int], tol: float, source: Optional[tuple] = None,
                 stall: int = 30, refresh: int = 100):
        self.t = t
        self.basis = basis
        self.tol = tol
        self.iterations = 0
        self.source = source  # (A, b, c) the tableau was built from
        self.stall = stall
        self.refresh = refresh

    def pivot(self, row: int, col: int) -> None:
        t = self.t
        t[row] /= t[row, col]
        colv = t[:, col].copy()
        colv[row] = 0.0
        nz = np.flatnonzero(np.abs(colv) > 0)
        if nz.size:
            t[nz] -= np.outer(colv[nz], t[row])
        self.basis[row] = col
        self.iterations += 1

    def rebuild(self) -> None:
        if self.source is None:
            return
        a, b, c = self.source
        basis = self.basis
        try:
            binv_a = np.linalg.solve(a[:, basis], np.column_stack([a, b]))
        except np.linalg.LinAlgError:
            return
        m = len(basis)
        self.t[:m] = binv_a
        self.t[:m, -1] = np.maximum(self.t[:m, -1], 0.0)
        self.t[-1, :-1] = c
        self.t[-1, -1] = 0.0
        for i, bv in enumerate(basis):
            if c[bv] != 0.0:
                self.t[-1] -= c[bv] * self.t[i]

    def run(self, allowed: int, max_iter: int) -> str:
        """Iterate until optimal. Only the first ``allowed`` columns may enter."""
        t, tol = self.t, self.tol
        m = t.shape[0] - 1
        degenerate = 0
        while self.iterations < max_iter:
            cost = t[-1, :allowed]
            entering = np.flatnonzero(cost < -tol)
            if entering.size == 0:
                return "optimal"
            if degenerate >= self.stall:
                col = int(entering[0])
            else:
                col = int(entering[np.argmin(cost[entering])])
            column = t[:m, col]
            ok = np.flatnonzero(column > tol)
            if ok.size == 0:
                return "unbounded"
            ratios = t[ok, -1] / column[ok]
            best = ratios.min()
            ties = ok[ratios <= best + tol * max(1.0, abs(best))]
            row = int(min(ties, key=lambda r: self.basis[r]))
            degenerate = degenerate + 1 if best <= tol else 0
            self.pivot(row, col)
            if self.refresh and self.iterations % self.refresh == 0:
                self.rebuild()
        raise RuntimeError("simplex iteration limit reached")


def simplex(c, a_eq, b_eq, tol: float = 1e-9, max_iter: int = 100_000) -> LPResult:
    a = np.array(a_eq, dtype=float)
    b = np.array(b_eq, dtype=float).reshape(-1)
    c = np.asarray(c, dtype=float).reshape(-1)
    m, k = a.shape
    if m == 0:
        if np.any(c < -tol):
            return LPResult("unbounded", None, -np.inf)
        return LPResult("optimal", np.zeros(k), 0.0)
    neg = b < 0
    a[neg] *= -1
    b[neg] *= -1

    # Phase one: artificial identity block, minimize the sum of artificials.
    t = np.zeros((m + 1, k + m + 1))
    t[:m, :k] = a
    t[:m, k : k + m] = np.eye(m)
    t[:m, -1] = b
    t[-1, :k] = -a.sum(axis=0)
    t[-1, -1] = -b.sum()
    a_art = np.hstack([a, np.eye(m)])
    c_art = np.concatenate([np.zeros(k), np.ones(m)])
    tab = _Tableau(t, list(range(k, k + m)), tol, (a_art, b, c_art))
    tab.run(k, max_iter)
    infeas = float(-t[-1, -1])
    scale = max(1.0, float(np.abs(b).max()))
    if infeas > 1e-7 * scale:
        return LPResult("infeasible", None, np.nan, tab.iterations, infeas)

    # Drive artificial variables out of the basis; drop redundant rows.
    keep = []
    for i in range(m):
        if tab.basis[i] >= k:
            cand = np.flatnonzero(np.abs(t[i, :k]) > 1e-7)
            if cand.size:
                tab.pivot(i, int(cand[0]))
                keep.append(i)
        else:
            keep.append(i)
    t2 = np.zeros((len(keep) + 1, k + 1))
    t2[:-1, :k] = t[keep, :k]
    t2[:-1, -1] = t[keep, -1]
    basis = [tab.basis[i] for i in keep]
    t2[-1, :k] = c
    for i, bv in enumerate(basis):
        if c[bv] != 0.0:
            t2[-1] -= c[bv] * t2[i]
    tab2 = _Tableau(t2, basis, tol, (a[keep], b[keep], c))
    tab2.iterations = tab.iterations
    status = tab2.run(k, max_iter)
    if status == "unbounded":
        return LPResult("unbounded", None, -np.inf, tab2.iterations)
    x = np.zeros(k)
    for i, bv in enumerate(tab2.basis):
        x[bv] = t2[i, -1]
    x = np.maximum(x, 0.0)
    return LPResult("optimal", x, float(c @ x), tab2.iterations, infeas)


def find_feasible(a_eq, b_eq, tol: float = 1e-9) -> LPResult:
    """Phase one only: any vertex of ``{A x = b, x >= 0}``."""
    return simplex(np.zeros(np.asarray(a_eq).shape[1]), a_eq, b_eq, tol)
