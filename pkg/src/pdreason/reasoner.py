"""Deductions, arguments, attacks, probabilities and labellings."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from .constraints import build_owa, build_system
from .model import (
    Atom,
    JointDistribution,
    Literal,
    PDFramework,
    PRule,
    SolveMode,
    conj_mask,
    literal_mask,
    marginal,
)
from .parser import AAGraph
from .solvers import (
    SolveResult,
    SolverConfig,
    SingularSystemError,
    is_feasible,
    optimize_bounds,
    solve_direct,
    solve_l1_relaxed,
    solve_lp,
    solve_max_linear_entropy,
    solve_sgd,
)

LEAF = None  # choice marking a literal used as a leaf rather than expanded


@dataclass(frozen=True)
class DeductionNode:
    literal: Literal
    rule: Optional[int]  # None for a literal leaf; a fact rule stands for the tau leaf


@dataclass(frozen=True)
class Deduction:
    """A derivation of ``claim``.

    A literal occurring more than once in a derivation is derived the same
    way each time, so the tree is stored as one node per support literal,
    root first, each with the rule used to expand it.
    """

    claim: Literal
    support: frozenset[Literal]
    tree: tuple[DeductionNode, ...]

    def __str__(self) -> str:
        return f"{{{', '.join(sorted(map(str, self.support)))}}} |- {self.claim}"


@dataclass
class Argument:
    deduction: Deduction
    probability: Optional[float] = None

    @property
    def claim(self) -> Literal:
        return self.deduction.claim

    @property
    def support(self) -> frozenset[Literal]:
        return self.deduction.support

    def __str__(self) -> str:
        return str(self.deduction)


@dataclass(frozen=True)
class Attack:
    attacker: int
    attackee: int


@dataclass
class Labelling:
    labels: dict
    epsilon: float = 1e-4

    def __getitem__(self, key) -> str:
        return self.labels[key]


class UnsatisfiableError(ValueError):
    """Raised when no distribution satisfies the rules under the chosen mode.

    ``kind`` is ``"rule-psat"`` when the rules themselves are inconsistent and
    ``"pcwa"`` when they are consistent but the closed-world rows are not.
    """

    def __init__(self, kind: str):
        msg = {
            "rule-psat": "the p-rules are not satisfiable (Rule-PSAT fails)",
            "pcwa": "the p-rules are satisfiable but not P-CWA consistent",
        }[kind]
        super().__init__(msg)
        self.kind = kind


# -- deductions -----------------------------------------------------------


def _derivations(framework: PDFramework, claim: Literal, leaf_ok, root_leaf: bool) -> Iterator[dict]:
    """Yield choice maps literal -> rule index (or LEAF) deriving ``claim``.

    ``leaf_ok(lit)`` says whether a non-root literal may stay unexpanded.
    Literals with no rules are always leaves when ``leaf_ok`` is None.
    """
    rules = framework.rules
    by_head: dict[Literal, list[int]] = {}
    for i, r in enumerate(rules):
        by_head.setdefault(r.head, []).append(i)

    def options(lit: Literal, is_root: bool) -> list[Optional[int]]:
        heads = by_head.get(lit, [])
        if leaf_ok is None:
            return heads if heads else [LEAF]
        opts: list[Optional[int]] = []
        if (root_leaf or not is_root) and leaf_ok(lit):
            opts.append(LEAF)
        return opts + heads

    def search(assign: dict, pending: list) -> Iterator[dict]:
        while pending and pending[0] in assign:
            pending = pending[1:]
        if not pending:
            yield assign
            return
        lit, rest = pending[0], pending[1:]
        for opt in options(lit, not assign):
            new = dict(assign)
            new[lit] = opt
            extra = list(rules[opt].body) if opt is not None else []
            yield from search(new, rest + extra)

    yield from search({}, [claim])


def _deduction(claim: Literal, choice: dict) -> Deduction:
    nodes = tuple(DeductionNode(lit, opt) for lit, opt in choice.items())
    return Deduction(claim, frozenset(choice), nodes)


def enumerate_maximal_deductions(framework: PDFramework, claim: Literal, subset_maximal: bool = False) -> list[Deduction]:
    """Deductions of ``claim`` that cannot be extended any further.

    Every literal that heads some rule is expanded by one of its rules; only
    literals without rules remain as leaves.  One deduction is kept per
    support set.  With ``subset_maximal`` the result is further reduced to
    supports not strictly contained in another support.  That stricter
    reading is not what the local closed-world rows encode: a fact
    ``<s <- >`` next to ``<s <- t>`` keeps ``{s}`` as a deduction here, so
    worlds with s but not t stay possible.
    """
    if not framework.rules_for(claim):
        return []
    found: dict[frozenset, Deduction] = {}
    for choice in _derivations(framework, claim, None, False):
        d = _deduction(claim, choice)
        found.setdefault(d.support, d)
    result = list(found.values())
    if subset_maximal:
        result = [d for d in result if not any(d.support < e.support for e in result)]
    return result


def deduction_zero_worlds(framework: PDFramework, subset_maximal: bool = False) -> frozenset[int]:
    """Worlds where some derivable literal holds but none of its deductions does."""
    n = framework.n
    forced = np.zeros(1 << n, dtype=bool)
    for lit in framework.literals():
        deds = enumerate_maximal_deductions(framework, lit, subset_maximal)
        if not deds:
            continue
        covered = np.zeros(1 << n, dtype=bool)
        for d in deds:
            covered |= conj_mask(n, sorted(d.support, key=lambda x: x.key))
        forced |= literal_mask(n, lit) & ~covered
    return frozenset(int(w) for w in np.flatnonzero(forced))


# -- arguments and attacks ------------------------------------------------


def enumerate_arguments(framework: PDFramework) -> list[Argument]:
    """All arguments, one per (claim, support) pair.

    A literal may stay an unexpanded leaf only when some rule concludes its
    negation (it is contested) and it is not the claim itself; facts close a
    branch.  Literals with no rule and no contesting rule cannot be leaves,
    so derivations through them are not arguments.
    """
    heads = {r.head for r in framework.rules}

    def contested(lit: Literal) -> bool:
        return lit.negate() in heads

    seen: set[tuple[Literal, frozenset]] = set()
    result = []
    for claim in framework.literals():
        if claim not in heads:
            continue
        for choice in _derivations(framework, claim, contested, False):
            d = _deduction(claim, choice)
            if (claim, d.support) not in seen:
                seen.add((claim, d.support))
                result.append(Argument(d))
    return result


def compute_attacks(arguments: Sequence[Argument]) -> list[Attack]:
    attacks = []
    for i, a in enumerate(arguments):
        target = a.claim.negate()
        for j, b in enumerate(arguments):
            if target in b.support:
                attacks.append(Attack(i, j))
    return attacks


def _support_conj(arg: Argument) -> list[Literal]:
    return sorted(arg.support, key=lambda x: x.key)


def argument_probability(argument: Argument, dist: JointDistribution) -> float:
    lits = _support_conj(argument)
    atoms = {}
    for lit in lits:
        if atoms.setdefault(lit.atom.index, lit.positive) != lit.positive:
            return 0.0
    return marginal(dist, lits)


# -- solving --------------------------------------------------------------


def solve_framework(
    framework: PDFramework,
    mode: str = "pcwa",
    entropy: str = "linear",
    backend: str = "direct",
    config: SolverConfig = SolverConfig(),
    check: bool = True,
) -> SolveResult:
    """Solve for a joint distribution under ``mode``.

    ``entropy`` is ``"linear"`` (most spread-out distribution, unique) or
    ``"none"`` (any solution the backend finds).  With ``check`` an exact
    feasibility test runs first and UnsatisfiableError is raised on failure.
    """
    system = build_system(framework, mode)
    if check and not is_feasible(system):
        if mode == "pcwa" and is_feasible(build_owa(framework)):
            raise UnsatisfiableError("pcwa")
        raise UnsatisfiableError("rule-psat")
    smode = SolveMode(mode, entropy == "linear", backend)
    if entropy == "linear":
        if backend == "lp":
            raise ValueError("the lp backend does not maximize entropy; use --entropy none")
        return solve_max_linear_entropy(system, config, backend, smode)
    if entropy != "none":
        raise ValueError(f"unknown entropy option {entropy!r}")
    if backend == "direct":
        try:
            return solve_direct(system, mode=smode)
        except SingularSystemError:
            return solve_lp(system, smode)
    if backend == "sgd":
        return solve_sgd(system, config, mode=smode)
    if backend == "lp":
        return solve_lp(system, smode)
    raise ValueError(f"unknown backend {backend!r}")


def solve_relaxed(framework: PDFramework, mode: str = "owa") -> SolveResult:
    """L1-closest distribution for rule sets that may be inconsistent."""
    return solve_l1_relaxed(build_system(framework, mode), mode=SolveMode(mode, False, "l1"))


def literal_probability(
    framework: PDFramework,
    literal: Literal,
    mode: str = "pcwa",
    entropy: str = "linear",
    backend: str = "direct",
    config: SolverConfig = SolverConfig(),
) -> float:
    return marginal(solve_framework(framework, mode, entropy, backend, config).dist, [literal])


def literal_bounds(framework: PDFramework, literal: Literal, mode: str = "pcwa") -> tuple[float, float]:
    system = build_system(framework, mode)
    if not is_feasible(system):
        raise UnsatisfiableError("pcwa" if mode == "pcwa" and is_feasible(build_owa(framework)) else "rule-psat")
    return optimize_bounds(system, [literal], "min"), optimize_bounds(system, [literal], "max")


def probabilistic_labelling(arguments: Sequence[Argument], dist: JointDistribution, epsilon: float = 1e-4) -> Labelling:
    labels = {}
    for i, arg in enumerate(arguments):
        p = arg.probability if arg.probability is not None else argument_probability(arg, dist)
        if p >= 1.0 - epsilon:
            labels[i] = "in"
        elif p <= epsilon:
            labels[i] = "out"
        else:
            labels[i] = "undec"
    return Labelling(labels, epsilon)


# -- abstract argumentation -------------------------------------------------


def aa_to_pd(graph: AAGraph) -> PDFramework:
    """One atom per argument; each argument holds when none of its attackers does."""
    atoms = {name: Atom(i, name) for i, name in enumerate(graph.arguments)}
    rules = []
    for name in graph.arguments:
        body = tuple(Literal(atoms[a], False) for a in graph.attackers(name))
        rules.append(PRule(Literal(atoms[name], True), body, 1.0))
    return PDFramework(tuple(atoms.values()), tuple(rules))


def verify_complete_labelling(graph: AAGraph, labelling: Labelling) -> bool:
    """Check that every label is legal given the labels of the attackers."""
    labels = labelling.labels
    if any(arg not in labels for arg in graph.arguments):
        return False
    for arg in graph.arguments:
        att = [labels[a] for a in graph.attackers(arg)]
        lab = labels[arg]
        if lab == "in" and not all(x == "out" for x in att):
            return False
        if lab == "out" and "in" not in att:
            return False
        if lab == "undec" and (all(x == "out" for x in att) or "in" in att):
            return False
        if lab not in ("in", "out", "undec"):
            return False
    return True


@dataclass
class AALabellingResult:
    framework: PDFramework
    arguments: list[Argument]
    labelling: Labelling  # keyed by AA argument name
    probabilities: dict[str, float]
    complete: bool
    dist: JointDistribution


def label_aa(graph: AAGraph, epsilon: float = 1e-4, backend: str = "direct", config: SolverConfig = SolverConfig()) -> AALabellingResult:
    """Map the graph to p-rules, solve closed-world with entropy, and label.

    Raises UnsatisfiableError("pcwa") when the mapped rules are not P-CWA
    consistent (e.g. an odd attack cycle).
    """
    framework = aa_to_pd(graph)
    res = solve_framework(framework, "pcwa", "linear", backend, config)
    arguments = enumerate_arguments(framework)
    probs: dict[str, float] = {}
    for arg in arguments:
        arg.probability = argument_probability(arg, res.dist)
        if arg.claim.positive:
            probs[arg.claim.atom.name] = arg.probability
    pd_labels = probabilistic_labelling(arguments, res.dist, epsilon)
    by_name = {}
    for i, arg in enumerate(arguments):
        if arg.claim.positive:
            by_name[arg.claim.atom.name] = pd_labels[i]
    labelling = Labelling(by_name, epsilon)
    return AALabellingResult(framework, arguments, labelling, probs, verify_complete_labelling(graph, labelling), res.dist)


# -- full analysis ----------------------------------------------------------


@dataclass
class Analysis:
    framework: PDFramework
    result: SolveResult
    literal_probs: dict[str, float]
    no_deduction: set[str]
    arguments: list[Argument]
    attacks: list[Attack]
    labelling: Labelling
    bounds: dict[str, tuple[float, float]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        mode = self.result.dist.mode
        return {
            "mode": mode.world,
            "entropy": "linear" if mode.entropy else "none",
            "solver": mode.backend,
            "converged": self.result.converged,
            "residual": self.result.residual,
            "entropy_bits": self.result.objective,
            "literals": [
                {
                    "literal": name,
                    "probability": p,
                    "no_deduction": name in self.no_deduction,
                    **({"bounds": list(self.bounds[name])} if name in self.bounds else {}),
                }
                for name, p in self.literal_probs.items()
            ],
            "arguments": [
                {
                    "id": i,
                    "claim": str(a.claim),
                    "support": sorted(map(str, a.support)),
                    "probability": a.probability,
                    "label": self.labelling[i],
                }
                for i, a in enumerate(self.arguments)
            ],
            "attacks": [[t.attacker, t.attackee] for t in self.attacks],
        }


def analyze(
    framework: PDFramework,
    mode: str = "pcwa",
    entropy: str = "linear",
    backend: str = "direct",
    config: SolverConfig = SolverConfig(),
    epsilon: float = 1e-4,
    relaxed: bool = False,
) -> Analysis:
    """Solve once and derive literal and argument probabilities, attacks and labels.

    With ``relaxed`` an L1-closest distribution is used, so inconsistent rule
    sets still produce an answer.
    """
    res = solve_relaxed(framework, mode) if relaxed else solve_framework(framework, mode, entropy, backend, config)
    literal_probs = {}
    no_deduction = set()
    for lit in framework.literals():
        literal_probs[str(lit)] = marginal(res.dist, [lit])
        if not framework.rules_for(lit):
            no_deduction.add(str(lit))
    arguments = enumerate_arguments(framework)
    for arg in arguments:
        arg.probability = argument_probability(arg, res.dist)
    attacks = compute_attacks(arguments)
    labelling = probabilistic_labelling(arguments, res.dist, epsilon)
    return Analysis(framework, res, literal_probs, no_deduction, arguments, attacks, labelling)
