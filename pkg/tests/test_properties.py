"""Randomized property checks on solved frameworks and argument graphs."""

import cvxpy as cp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pdreason.constraints import build_system
from pdreason.model import marginal
from pdreason.parser import parse_pd
from pdreason.reasoner import (
    UnsatisfiableError,
    argument_probability,
    enumerate_arguments,
    label_aa,
    solve_framework,
)
from pdreason.solvers import solve_max_linear_entropy

from conftest import load_aa
from labelling_oracle import complete_labellings
from propcheck import _world_cap, check_aa, check_general, random_framework, random_graph, solve_any

seeds = st.integers(0, 2**32 - 1)

HOLDS_GENERAL = ("margin", "me-unique", "contradictory-support", "self-attack", "below-claim", "coherent")
HOLDS_AA = ("unattacked-one", "attacker-one", "attackers-zero", "one-attackers-zero", "some-attacker-one-zero", "optimistic")


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_general_properties(seed):
    fw = random_framework(np.random.default_rng(seed))
    try:
        verdict = check_general(fw)
    except UnsatisfiableError:
        return
    for name in HOLDS_GENERAL:
        assert verdict[name], name


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_aa_properties(seed):
    graph = random_graph(np.random.default_rng(seed))
    try:
        verdict = check_aa(graph)
    except UnsatisfiableError:
        return
    for name in HOLDS_AA:
        assert verdict[name], name


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_entropy_solution_matches_min_norm_oracle(seed):
    fw = random_framework(np.random.default_rng(seed), max_atoms=3)
    mode, res = solve_any(fw)
    sys_ = build_system(fw, mode)
    x = cp.Variable(sys_.n_worlds, nonneg=True)
    cp.Problem(cp.Minimize(cp.sum_squares(x)), [sys_.a @ x == sys_.b]).solve(solver=cp.CLARABEL)
    assert np.allclose(res.dist.probs, x.value, atol=1e-4)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_probabilistic_labelling_is_complete_or_marked(seed):
    graph = random_graph(np.random.default_rng(seed), max_args=5)
    try:
        res = label_aa(graph)
    except UnsatisfiableError:
        return
    assert res.complete == (res.labelling.labels in complete_labellings(graph))


def test_linear_entropy_can_zero_a_world_that_may_be_positive():
    # three open-world rules, none certain; world 001 can hold up to ~0.063
    fw = parse_pd("~s1 <- ~s2 : 0.14. s2 <- s0 : 0.83. s1 <- ~s0 : 0.61.")
    sys_ = build_system(fw, "owa")
    assert _world_cap(sys_, 1) > 0.05
    res = solve_max_linear_entropy(sys_)
    assert res.dist.probs[1] == pytest.approx(0.0, abs=1e-9)
    x = cp.Variable(8, nonneg=True)
    cp.Problem(cp.Minimize(cp.sum_squares(x)), [sys_.a @ x == sys_.b]).solve(solver=cp.CLARABEL)
    assert x.value[1] == pytest.approx(0.0, abs=1e-6)
    y = cp.Variable(8, nonneg=True)
    cp.Problem(cp.Maximize(cp.sum(cp.entr(y))), [sys_.a @ y == sys_.b]).solve(solver=cp.CLARABEL)
    assert y.value[1] > 1e-4  # the logarithmic entropy keeps it positive


def test_argument_below_claim_without_a_rival_argument():
    # s0 <- ~s1 yields no argument (~s1 can be neither expanded nor contested)
    fw = parse_pd("s0 <- s1 : 0.5. s0 <- ~s1 : 0.5. ~s1 <- s2 : 0.5.")
    res = solve_framework(fw)
    args = [a for a in enumerate_arguments(fw) if str(a.claim) == "s0"]
    assert len(args) == 1
    p_arg = argument_probability(args[0], res.dist)
    assert p_arg < marginal(res.dist, [fw.literal("s0")]) - 0.05


def test_zero_argument_without_a_certain_attacker():
    res = label_aa(load_aa("floating.aaf"))
    assert res.probabilities["c"] == pytest.approx(0.0, abs=1e-9)
    assert res.probabilities["a"] == pytest.approx(0.5) and res.probabilities["b"] == pytest.approx(0.5)
