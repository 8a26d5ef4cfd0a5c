"""Compile a p-rule framework into the linear system A pi = B over worlds."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import Literal, PDFramework, check_cap, conj_mask, literal_mask


@dataclass(frozen=True)
class LinearSystem:
    a: np.ndarray
    b: np.ndarray
    row_tags: tuple[str, ...]
    n_worlds: int  # number of leading columns that are world probabilities

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.a, dtype=float))
        b = np.asarray(self.b, dtype=float).reshape(-1)
        if a.shape[0] != b.shape[0] or a.shape[0] != len(self.row_tags):
            raise ValueError("row counts of a, b and row_tags disagree")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "row_tags", tuple(self.row_tags))

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    @property
    def augmented(self) -> bool:
        return self.a.shape[1] != self.n_worlds

    def residual(self, x) -> float:
        """Max-norm of A x - B."""
        if self.a.shape[0] == 0:
            return 0.0
        return float(np.abs(self.a @ np.asarray(x, dtype=float) - self.b).max())

    def dump_csv(self, path) -> None:
        """Write one row per constraint: tag, the coefficients, then B."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["tag"] + [f"x{j}" for j in range(self.a.shape[1])] + ["b"])
            for tag, row, rhs in zip(self.row_tags, self.a, self.b):
                w.writerow([tag] + [repr(float(v)) for v in row] + [repr(float(rhs))])


@dataclass(frozen=True)
class HeadGroup:
    head: Literal
    bodies: tuple[tuple[Literal, ...], ...]


def build_owa(framework: PDFramework) -> LinearSystem:
    n = framework.n
    check_cap(n)
    rows, rhs, tags = [], [], []
    for i, rule in enumerate(framework.rules):
        head = literal_mask(n, rule.head)
        if not rule.body:
            rows.append(head.astype(float))
            rhs.append(rule.theta)
        else:
            body = conj_mask(n, rule.body)
            row = np.zeros(1 << n)
            row[body & head] = rule.theta - 1.0
            row[body & ~head] = rule.theta
            rows.append(row)
            rhs.append(0.0)
        tags.append(f"rule:{i}")
    rows.append(np.ones(1 << n))
    rhs.append(1.0)
    tags.append("normalization")
    return LinearSystem(np.vstack(rows), np.array(rhs), tuple(tags), 1 << n)


def group_heads(framework: PDFramework) -> list[HeadGroup]:
    order: list[Literal] = []
    bodies: dict[Literal, list[tuple[Literal, ...]]] = {}
    for rule in framework.rules:
        if rule.head not in bodies:
            order.append(rule.head)
            bodies[rule.head] = []
        bodies[rule.head].append(rule.body)
    return [HeadGroup(h, tuple(bodies[h])) for h in order]


def unsupported_mask(n: int, group: HeadGroup) -> np.ndarray:
    """Worlds where the head holds but none of its rule bodies does."""
    covered = np.zeros(1 << n, dtype=bool)
    for body in group.bodies:
        covered |= conj_mask(n, body)
    return literal_mask(n, group.head) & ~covered


def append_pcwa_rows(system: LinearSystem, groups: Sequence[HeadGroup]) -> LinearSystem:
    n_worlds = system.n_worlds
    n = n_worlds.bit_length() - 1
    extra = [unsupported_mask(n, g).astype(float) for g in groups]
    if not extra:
        return system
    a = np.vstack([system.a] + extra)
    b = np.concatenate([system.b, np.zeros(len(extra))])
    tags = system.row_tags + tuple(f"pcwa:{g.head}" for g in groups)
    return LinearSystem(a, b, tags, n_worlds)


def build_system(framework: PDFramework, mode: str = "pcwa") -> LinearSystem:
    if mode not in ("owa", "pcwa"):
        raise ValueError(f"unknown mode {mode!r}")
    system = build_owa(framework)
    if mode == "pcwa":
        system = append_pcwa_rows(system, group_heads(framework))
    return system


def zero_forced_worlds(system: LinearSystem) -> frozenset[int]:
    """Worlds forced to probability 0 by the closed-world rows."""
    forced = np.zeros(system.n_worlds, dtype=bool)
    for tag, row in zip(system.row_tags, system.a):
        if tag.startswith("pcwa:"):
            forced |= row[: system.n_worlds] != 0
    return frozenset(int(w) for w in np.flatnonzero(forced))


def build_lagrange_augmented(system: LinearSystem) -> LinearSystem:
    """Stationarity system of the linear-entropy problem.

    Unknowns are ``[pi; lam]``.  The first m rows restate ``A pi = B``; the
    next 2^n rows say ``pi_j - sum_i lam_i a_ij = 0``, i.e. ``pi = A^T lam``.
    """
    if system.augmented:
        raise ValueError("system is already augmented")
    a = system.a
    m, k = a.shape
    top = np.hstack([a, np.zeros((m, m))])
    bottom = np.hstack([np.eye(k), -a.T])
    tags = system.row_tags + tuple(f"lagrange:{j}" for j in range(k))
    return LinearSystem(
        np.vstack([top, bottom]), np.concatenate([system.b, np.zeros(k)]), tags, k
    )
