"""Dense Gaussian elimination with partial pivoting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class EliminationResult:
    x: np.ndarray
    rank: int
    consistent: bool


def gaussian_solve(a, b, tol: float = 1e-10) -> EliminationResult:
    """Solve ``a x = b`` by row reduction.

    Rank-deficient systems are accepted: columns without a pivot are free and
    set to zero.  ``consistent`` is False when a zero row meets a nonzero
    right-hand side.
    """
    m_ = np.array(a, dtype=float)
    r = np.array(b, dtype=float).reshape(-1)
    rows, cols = m_.shape
    scale = max(np.abs(m_).max(initial=0.0), 1.0)
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        p = row + int(np.argmax(np.abs(m_[row:, col])))
        if abs(m_[p, col]) <= tol * scale:
            continue
        if p != row:
            m_[[row, p]] = m_[[p, row]]
            r[[row, p]] = r[[p, row]]
        below = m_[row + 1 :, col] / m_[row, col]
        nz = np.flatnonzero(below)
        if nz.size:
            idx = nz + row + 1
            m_[idx, col:] -= np.outer(below[nz], m_[row, col:])
            r[idx] -= below[nz] * r[row]
        pivots.append(col)
        row += 1
    bscale = max(np.abs(np.asarray(b, dtype=float)).max(initial=0.0), 1.0)
    consistent = bool(np.all(np.abs(r[row:]) <= 1e3 * tol * bscale * scale))
    x = np.zeros(cols)
    for i in range(len(pivots) - 1, -1, -1):
        c = pivots[i]
        x[c] = (r[i] - m_[i, c + 1 :] @ x[c + 1 :]) / m_[i, c]
    return EliminationResult(x, len(pivots), consistent)
