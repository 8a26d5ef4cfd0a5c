"""Shared solver configuration and result types."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..model import JointDistribution


class SolverError(RuntimeError):
    pass


class SingularSystemError(SolverError):
    """The linear system is singular and has no consistent solution."""


class InfeasibleError(SolverError):
    """No distribution satisfies the constraints."""


@dataclass(frozen=True)
class SolverConfig:
    learning_rate: Optional[float] = None  # None means 1 / 2^n
    momentum: float = 0.99
    tol: float = 1e-3
    max_epochs: int = 200_000
    seed: int = 0
    clip: bool = True
    batch_size: Optional[int] = None  # rows per update; None means all rows

    def __post_init__(self):
        if self.learning_rate is not None and self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError("momentum must lie in [0, 1)")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.batch_size is not None and self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be at least 1")


@dataclass
class SolveResult:
    dist: JointDistribution
    converged: bool
    epochs_used: int = 0
    objective: Optional[float] = None
    status: str = "ok"
    solution: Optional[np.ndarray] = field(default=None, repr=False)  # raw unknowns, incl. multipliers

    @property
    def residual(self) -> float:
        return self.dist.residual

    @property
    def multipliers(self) -> Optional[np.ndarray]:
        if self.solution is None:
            return None
        k = self.dist.probs.shape[0]
        return self.solution[k:]
