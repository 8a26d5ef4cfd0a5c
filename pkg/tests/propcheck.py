"""Property checks shared by the hypothesis suite and the acceptance gate.

Each ``check_*`` function returns a dict mapping property name to a bool.
Instances are drawn with numpy generators so the acceptance gate can run a
fixed, seeded batch.
"""

from __future__ import annotations

import numpy as np

from pdreason.bench import BenchSpec, generate_with_distribution
from pdreason.constraints import build_system
from pdreason.model import marginal
from pdreason.parser import AAGraph
from pdreason.reasoner import (
    UnsatisfiableError,
    aa_to_pd,
    argument_probability,
    compute_attacks,
    enumerate_arguments,
    solve_framework,
)
from pdreason.solvers import is_feasible, optimize_bounds, solve_lp
from pdreason.solvers.simplex import simplex

TOL = 1e-6
POS = 1e-9  # strictly positive means above this


def random_framework(rng: np.random.Generator, max_atoms: int = 4, max_rules: int = 6):
    n = int(rng.integers(2, max_atoms + 1))
    m = int(rng.integers(1, max_rules + 1))
    spec = BenchSpec(n, m, seed=int(rng.integers(2**31)))
    fw, _ = generate_with_distribution(spec, rng)
    return fw


def random_graph(rng: np.random.Generator, max_args: int = 6, density: float = 0.3) -> AAGraph:
    k = int(rng.integers(1, max_args + 1))
    names = [f"a{i}" for i in range(k)]
    attacks = [(x, y) for x in names for y in names if rng.random() < density]
    return AAGraph(names, attacks)


def _world_cap(system, w: int) -> float:
    """Largest feasible value of pi(w)."""
    c = np.zeros(system.n_worlds)
    c[w] = -1.0
    res = simplex(c, system.a, system.b)
    return -res.value


def solve_any(framework):
    """P-CWA with linear entropy if consistent, otherwise open world."""
    for mode in ("pcwa", "owa"):
        if is_feasible(build_system(framework, mode)):
            return mode, solve_framework(framework, mode, "linear", "direct")
    raise UnsatisfiableError("rule-psat")


def check_general(framework) -> dict[str, bool]:
    mode, res = solve_any(framework)
    dist = res.dist
    system = build_system(framework, mode)
    n = framework.n
    out: dict[str, bool] = {}

    lits = framework.literals()
    out["margin"] = all(
        marginal(dist, [l]) >= -TOL and abs(marginal(dist, [l]) + marginal(dist, [l.negate()]) - 1) <= TOL
        for l in lits
    )

    # Any other feasible point (a simplex vertex) has no larger linear entropy.
    vertex = solve_lp(system).dist.probs
    lin = lambda p: float(np.sum(p * (1 - p)))
    out["me-unique"] = lin(dist.probs) >= lin(vertex) - TOL and system.residual(dist.probs) <= 1e-6

    caps = [_world_cap(system, w) for w in range(1 << n)]
    out["world-positivity"] = all(dist.probs[w] > POS for w in range(1 << n) if caps[w] > 1e-7)
    out["literal-positivity"] = all(
        marginal(dist, [l]) > POS for l in lits if optimize_bounds(system, [l], "max") > 1e-7
    )

    args = enumerate_arguments(framework)
    for a in args:
        a.probability = argument_probability(a, dist)
    attacks = compute_attacks(args)
    out["contradictory-support"] = all(
        a.probability <= TOL for a in args if any(l.negate() in a.support for l in a.support)
    )
    out["self-attack"] = all(a.probability <= TOL for a in args if a.claim.negate() in a.support)
    out["below-claim"] = all(a.probability <= marginal(dist, [a.claim]) + TOL for a in args)
    iff = True
    for a in args:
        equal = abs(a.probability - marginal(dist, [a.claim])) <= TOL
        others = any(b is not a and b.claim == a.claim and b.probability > TOL for b in args)
        iff &= equal == (not others)
    out["claim-equality-iff"] = iff
    out["coherent"] = all(args[t.attacker].probability + args[t.attackee].probability <= 1 + TOL for t in attacks)
    return out


def aa_probabilities(graph: AAGraph):
    """Solve the mapped framework; return per-argument probabilities keyed by name."""
    fw = aa_to_pd(graph)
    res = solve_framework(fw, "pcwa", "linear", "direct")
    probs = {}
    for a in enumerate_arguments(fw):
        if a.claim.positive:
            probs[a.claim.atom.name] = argument_probability(a, res.dist)
    return probs


def check_aa(graph: AAGraph, eps: float = 1e-4) -> dict[str, bool]:
    probs = aa_probabilities(graph)
    one = lambda x: probs[x] >= 1 - eps
    zero = lambda x: probs[x] <= eps
    out = {k: True for k in ("unattacked-one", "attacker-one", "attackers-zero", "one-attackers-zero",
                             "zero-some-attacker-one", "some-attacker-one-zero", "optimistic")}
    for a in graph.arguments:
        att = graph.attackers(a)
        if not att:
            out["unattacked-one"] &= one(a)
        if a in att:
            continue
        for b in att:
            if one(b):
                out["attacker-one"] &= zero(a)
        if all(zero(b) for b in att):
            out["attackers-zero"] &= one(a)
        if one(a):
            out["one-attackers-zero"] &= all(zero(b) for b in att)
        if zero(a):
            out["zero-some-attacker-one"] &= any(one(b) for b in att)
        if any(one(b) for b in att):
            out["some-attacker-one-zero"] &= zero(a)
        out["optimistic"] &= probs[a] >= 1 - sum(probs[b] for b in att) - eps
    return out
