"""Language, p-rules, possible worlds and joint distributions.

Worlds are integers in ``range(2**n)``.  Atom 0 is the most significant bit,
so the world ``0b101`` over three atoms makes atoms 0 and 2 true and atom 1
false.  This is the same ordering as the Boolean strings used when writing
distributions by hand, e.g. ``pi("10")`` is the world where only atom 0 holds.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

DEFAULT_WORLD_CAP = 24


class WorldCapError(ValueError):
    """Raised when a language is too large to enumerate its worlds."""

    def __init__(self, n: int, cap: int):
        super().__init__(f"language has {n} atoms, world cap is {cap} (set PD_WORLD_CAP to raise it)")
        self.n = n
        self.cap = cap


class UnresolvedLiteralError(ValueError):
    pass


def world_cap() -> int:
    raw = os.environ.get("PD_WORLD_CAP")
    if raw is None:
        return DEFAULT_WORLD_CAP
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_WORLD_CAP


def check_cap(n: int) -> None:
    cap = world_cap()
    if n > cap:
        raise WorldCapError(n, cap)


@dataclass(frozen=True)
class Atom:
    index: int
    name: str


@dataclass(frozen=True)
class Literal:
    atom: Atom
    positive: bool = True

    def negate(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    def __neg__(self) -> "Literal":
        return self.negate()

    def __str__(self) -> str:
        return self.atom.name if self.positive else "~" + self.atom.name

    @property
    def key(self) -> tuple[int, bool]:
        return (self.atom.index, self.positive)


@dataclass(frozen=True)
class PRule:
    """Conditional probability statement Pr(head | body) = theta."""

    head: Literal
    body: tuple[Literal, ...] = ()
    theta: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.theta <= 1.0:
            raise ValueError(f"theta must lie in (0, 1], got {self.theta}")
        seen: dict[int, bool] = {}
        deduped = []
        for lit in self.body:
            prev = seen.get(lit.atom.index)
            if prev is None:
                seen[lit.atom.index] = lit.positive
                deduped.append(lit)
            elif prev != lit.positive:
                raise ValueError(f"body contains both {lit.atom.name} and ~{lit.atom.name}")
        object.__setattr__(self, "body", tuple(deduped))

    @classmethod
    def make(cls, head: Literal, body: Sequence[Literal], theta: float) -> "PRule":
        """Build a rule, rewriting theta == 0 to the negated head with theta 1."""
        if theta == 0.0:
            return cls(head.negate(), tuple(body), 1.0)
        return cls(head, tuple(body), float(theta))

    def __str__(self) -> str:
        body = ", ".join(str(b) for b in self.body)
        return f"<{self.head} <- {body}>:{self.theta:g}"


@dataclass(frozen=True)
class World:
    value: int
    n: int

    @property
    def bits(self) -> tuple[bool, ...]:
        return tuple(bool((self.value >> (self.n - 1 - i)) & 1) for i in range(self.n))

    def holds(self, lit: Literal) -> bool:
        if not 0 <= lit.atom.index < self.n:
            raise UnresolvedLiteralError(f"literal {lit} is outside a {self.n}-atom language")
        return bool((self.value >> (self.n - 1 - lit.atom.index)) & 1) == lit.positive

    def __str__(self) -> str:
        return format(self.value, f"0{self.n}b") if self.n else ""


@dataclass(frozen=True)
class PDFramework:
    atoms: tuple[Atom, ...] = ()
    rules: tuple[PRule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "rules", tuple(self.rules))
        for i, atom in enumerate(self.atoms):
            if atom.index != i:
                raise ValueError("atom indices must be dense and ordered")
        if len({a.name for a in self.atoms}) != len(self.atoms):
            raise ValueError("atom names must be unique")
        for rule in self.rules:
            for lit in (rule.head, *rule.body):
                if lit.atom not in self.atoms:
                    raise UnresolvedLiteralError(f"literal {lit} does not belong to the language")

    @property
    def n(self) -> int:
        return len(self.atoms)

    def atom(self, name: str) -> Atom:
        for a in self.atoms:
            if a.name == name:
                return a
        raise KeyError(name)

    def literal(self, text: str) -> Literal:
        """Resolve ``name`` or ``~name`` to a literal of this language."""
        text = text.strip()
        positive = True
        while text.startswith("~"):
            positive = not positive
            text = text[1:].strip()
        try:
            return Literal(self.atom(text), positive)
        except KeyError:
            raise UnresolvedLiteralError(f"unknown atom {text!r}") from None

    def literals(self) -> list[Literal]:
        """Every literal of the closed language, positive before negative per atom."""
        return [Literal(a, s) for a in self.atoms for s in (True, False)]

    def rules_for(self, head: Literal) -> list[int]:
        return [i for i, r in enumerate(self.rules) if r.head == head]


def enumerate_worlds(atoms: Sequence[Atom]) -> Iterator[World]:
    n = len(atoms)
    check_cap(n)
    for v in range(1 << n):
        yield World(v, n)


def satisfies(world: World, conj: Sequence[Literal]) -> bool:
    return all(world.holds(lit) for lit in conj)


def literal_mask(n: int, lit: Literal) -> np.ndarray:
    """Boolean vector over the 2^n worlds marking where ``lit`` holds."""
    if not 0 <= lit.atom.index < n:
        raise UnresolvedLiteralError(f"literal {lit} is outside a {n}-atom language")
    check_cap(n)
    worlds = np.arange(1 << n, dtype=np.int64)
    bit = (worlds >> (n - 1 - lit.atom.index)) & 1
    return bit == (1 if lit.positive else 0)


def conj_mask(n: int, conj: Sequence[Literal]) -> np.ndarray:
    mask = np.ones(1 << n, dtype=bool)
    for lit in conj:
        mask &= literal_mask(n, lit)
    return mask


@dataclass(frozen=True)
class SolveMode:
    world: str = "pcwa"
    entropy: bool = True
    backend: str = "direct"

    def __str__(self) -> str:
        return f"{self.world}/{'linear' if self.entropy else 'none'}/{self.backend}"


@dataclass(frozen=True)
class JointDistribution:
    probs: np.ndarray
    residual: float = 0.0
    mode: SolveMode = field(default_factory=SolveMode)

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        size = p.shape[0] if p.ndim == 1 else -1
        if size < 1 or size & (size - 1):
            raise ValueError("distribution length must be a power of two")
        if p.min() < -1e-9 or p.max() > 1 + 1e-9:
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(p.sum() - 1.0) > 1e-6:
            raise ValueError(f"probabilities sum to {p.sum()}, not 1")
        p = np.clip(p, 0.0, 1.0)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @classmethod
    def from_raw(cls, vec, residual: float = 0.0, mode: SolveMode | None = None) -> "JointDistribution":
        """Clip to the box and renormalize; falls back to uniform for all-zero input."""
        p = np.clip(np.asarray(vec, dtype=float), 0.0, 1.0)
        total = p.sum()
        p = p / total if total > 0 else np.full(p.shape, 1.0 / p.shape[0])
        return cls(p, residual, mode or SolveMode())

    @property
    def n(self) -> int:
        return int(self.probs.shape[0]).bit_length() - 1

    def world(self, bits: str) -> float:
        """Probability of the world written as a Boolean string, atom 0 first."""
        return float(self.probs[int(bits, 2)])


def marginal(dist: JointDistribution, conj: Sequence[Literal]) -> float:
    if not conj:
        return 1.0
    return float(dist.probs[conj_mask(dist.n, conj)].sum())


def entropy_bits(probs) -> float:
    """Von Neumann entropy -sum p log2 p with 0 log 0 = 0."""
    p = np.asarray(probs, dtype=float)
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


@dataclass
class RuleCheck:
    rule: int
    kind: str  # "fact" or "conditional"
    residual: float
    status: str  # "pass", "fail" or "vacuous-body"


@dataclass
class ConsistencyReport:
    rules: list[RuleCheck]
    bounds_residual: float
    normalization_residual: float
    tol: float

    @property
    def verdict(self) -> bool:
        return (
            all(r.status != "fail" for r in self.rules)
            and self.bounds_residual <= self.tol
            and self.normalization_residual <= self.tol
        )

    def to_dict(self) -> dict:
        return {
            "verdict": "pass" if self.verdict else "fail",
            "tol": self.tol,
            "bounds_residual": self.bounds_residual,
            "normalization_residual": self.normalization_residual,
            "rules": [vars(r) for r in self.rules],
        }


def check_consistency_by_substitution(framework: PDFramework, probs, tol: float = 1e-6) -> ConsistencyReport:
    """Substitute a candidate distribution into every rule's probability reading.

    ``probs`` may be a JointDistribution or a raw vector, so that unnormalized
    or out-of-box candidates can be diagnosed too.
    """
    p = np.asarray(probs.probs if isinstance(probs, JointDistribution) else probs, dtype=float)
    n = framework.n
    if p.shape != (1 << n,):
        raise ValueError(f"expected {1 << n} world probabilities, got {p.shape}")
    checks = []
    for i, rule in enumerate(framework.rules):
        head = conj_mask(n, (rule.head, *rule.body))
        if not rule.body:
            res = abs(p[head].sum() - rule.theta)
            checks.append(RuleCheck(i, "fact", float(res), "pass" if res <= tol else "fail"))
            continue
        pb = p[conj_mask(n, rule.body)].sum()
        if pb < tol:
            checks.append(RuleCheck(i, "conditional", 0.0, "vacuous-body"))
            continue
        res = abs(p[head].sum() / pb - rule.theta)
        checks.append(RuleCheck(i, "conditional", float(res), "pass" if res <= tol else "fail"))
    bounds = float(max(0.0, -p.min(), p.max() - 1.0))
    norm = float(abs(p.sum() - 1.0))
    return ConsistencyReport(checks, bounds, norm, tol)
