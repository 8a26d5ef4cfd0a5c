"""Probabilistic deduction: p-rules, joint distributions over worlds, arguments."""

from .constraints import LinearSystem, build_system
from .model import Atom, JointDistribution, Literal, PDFramework, PRule, marginal
from .parser import AAGraph, ParseError, parse_aa, parse_pd, serialize_pd
from .reasoner import (
    UnsatisfiableError,
    aa_to_pd,
    analyze,
    enumerate_arguments,
    label_aa,
    literal_bounds,
    literal_probability,
    solve_framework,
    solve_relaxed,
)
from .solvers import SolverConfig

__all__ = [
    "AAGraph",
    "Atom",
    "JointDistribution",
    "LinearSystem",
    "Literal",
    "PDFramework",
    "PRule",
    "ParseError",
    "SolverConfig",
    "UnsatisfiableError",
    "aa_to_pd",
    "analyze",
    "build_system",
    "enumerate_arguments",
    "label_aa",
    "literal_bounds",
    "literal_probability",
    "marginal",
    "parse_aa",
    "parse_pd",
    "serialize_pd",
    "solve_framework",
    "solve_relaxed",
]
