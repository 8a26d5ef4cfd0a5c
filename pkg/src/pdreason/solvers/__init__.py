from .base import InfeasibleError, SingularSystemError, SolveResult, SolverConfig, SolverError
from .direct import solve_direct
from .linalg import EliminationResult, gaussian_solve
from .entropy import min_norm_nonneg, solve_max_linear_entropy
from .lp import is_feasible, optimize_bounds, solve_l1_relaxed, solve_lp
from .sgd import solve_sgd
from .simplex import LPResult, find_feasible, simplex

__all__ = [
    "EliminationResult",
    "InfeasibleError",
    "LPResult",
    "SingularSystemError",
    "SolveResult",
    "SolverConfig",
    "SolverError",
    "find_feasible",
    "gaussian_solve",
    "is_feasible",
    "min_norm_nonneg",
    "optimize_bounds",
    "simplex",
    "solve_direct",
    "solve_l1_relaxed",
    "solve_lp",
    "solve_max_linear_entropy",
    "solve_sgd",
]
