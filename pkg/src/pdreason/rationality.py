"""Rationality postulates for argument probabilities.

Each check takes argument probabilities and the attack relation and returns
whether the postulate holds, within ``tol``.
"""

from __future__ import annotations

from typing import Sequence

from .reasoner import Attack

POSTULATES = ("COH", "SFOU", "FOU", "SOPT", "OPT", "JUS", "TER")


def attackers_of(n_args: int, attacks: Sequence[Attack]) -> list[list[int]]:
    result: list[list[int]] = [[] for _ in range(n_args)]
    for t in attacks:
        result[t.attackee].append(t.attacker)
    return result


def coherent(probs: Sequence[float], attacks: Sequence[Attack], tol: float = 1e-6) -> bool:
    return all(probs[t.attacker] + probs[t.attackee] <= 1 + tol for t in attacks)


def semi_founded(probs, attacks, tol: float = 1e-6) -> bool:
    att = attackers_of(len(probs), attacks)
    return all(p >= 0.5 - tol for p, a in zip(probs, att) if not a)


def founded(probs, attacks, tol: float = 1e-6) -> bool:
    att = attackers_of(len(probs), attacks)
    return all(p >= 1 - tol for p, a in zip(probs, att) if not a)


def semi_optimistic(probs, attacks, tol: float = 1e-6) -> bool:
    att = attackers_of(len(probs), attacks)
    return all(p >= 1 - sum(probs[b] for b in a) - tol for p, a in zip(probs, att) if a)


def optimistic(probs, attacks, tol: float = 1e-6) -> bool:
    att = attackers_of(len(probs), attacks)
    return all(p >= 1 - sum(probs[b] for b in a) - tol for p, a in zip(probs, att))


def justifiable(probs, attacks, tol: float = 1e-6) -> bool:
    return coherent(probs, attacks, tol) and optimistic(probs, attacks, tol)


def ternary(probs, attacks=(), tol: float = 1e-6) -> bool:
    return all(min(abs(p), abs(p - 0.5), abs(p - 1)) <= tol for p in probs)


def check_all(probs, attacks, tol: float = 1e-6) -> dict[str, bool]:
    fns = (coherent, semi_founded, founded, semi_optimistic, optimistic, justifiable, ternary)
    return {name: fn(probs, attacks, tol) for name, fn in zip(POSTULATES, fns)}
