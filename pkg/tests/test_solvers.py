import cvxpy as cp
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from pdreason.constraints import build_lagrange_augmented, build_owa, build_system
from pdreason.model import Literal
from pdreason.solvers import (
    InfeasibleError,
    SingularSystemError,
    SolverConfig,
    gaussian_solve,
    is_feasible,
    min_norm_nonneg,
    optimize_bounds,
    simplex,
    solve_direct,
    solve_l1_relaxed,
    solve_lp,
    solve_max_linear_entropy,
    solve_sgd,
)

from conftest import load_pd

matrices = st.integers(1, 6).flatmap(
    lambda n: st.tuples(
        st.lists(st.floats(-5, 5), min_size=n * n, max_size=n * n).map(lambda v: np.array(v).reshape(n, n)),
        st.lists(st.floats(-5, 5), min_size=n, max_size=n).map(np.array),
    )
)


@given(matrices)
def test_gaussian_elimination_matches_numpy(ab):
    a, b = ab
    if abs(np.linalg.det(a)) < 1e-3 or np.linalg.cond(a) > 1e6:
        return
    res = gaussian_solve(a, b)
    assert res.consistent and res.rank == a.shape[0]
    assert np.allclose(res.x, np.linalg.solve(a, b), atol=1e-6)


def test_gaussian_elimination_rank_deficient():
    a = np.array([[1.0, 2.0], [2.0, 4.0]])
    res = gaussian_solve(a, np.array([1.0, 2.0]))
    assert res.rank == 1 and res.consistent and np.allclose(a @ res.x, [1, 2])
    assert not gaussian_solve(a, np.array([1.0, 3.0])).consistent


lp_instances = st.tuples(st.integers(1, 4), st.integers(2, 7), st.integers(0, 10_000))


@given(lp_instances)
def test_simplex_matches_scipy(inst):
    m, k, seed = inst
    rng = np.random.default_rng(seed)
    a = rng.integers(-3, 4, size=(m, k)).astype(float)
    x0 = rng.random(k) * (rng.random(k) < 0.7)
    b = a @ x0  # feasible by construction
    c = rng.integers(-2, 5, size=k).astype(float)
    ours = simplex(c, a, b)
    ref = linprog(c, A_eq=a, b_eq=b, bounds=[(0, None)] * k, method="highs")
    if ref.status == 3:
        assert ours.status == "unbounded"
        return
    assert ours.status == "optimal"
    assert ours.value == pytest.approx(ref.fun, abs=1e-6)
    assert np.allclose(a @ ours.x, b, atol=1e-7) and (ours.x >= 0).all()


def test_simplex_infeasible_and_empty():
    res = simplex([0.0, 0.0], [[1.0, 1.0]], [-1.0])
    assert res.status == "infeasible" and res.infeasibility > 0
    assert simplex([1.0], np.zeros((0, 1)), []).status == "optimal"
    assert simplex([-1.0], np.zeros((0, 1)), []).status == "unbounded"


def test_simplex_redundant_rows():
    a = np.array([[1.0, 1.0, 0.0], [2.0, 2.0, 0.0], [0.0, 0.0, 1.0]])
    res = simplex([1.0, 2.0, 0.0], a, [1.0, 2.0, 0.5])
    assert res.status == "optimal" and res.value == pytest.approx(1.0)


@given(st.integers(0, 10_000))
def test_min_norm_nonneg_matches_cvxpy(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(3, 9))
    m = int(rng.integers(1, k))
    a = rng.normal(size=(m, k))
    x0 = rng.random(k) * (rng.random(k) < 0.6)
    b = a @ x0
    x, ok = min_norm_nonneg(a, b)
    v = cp.Variable(k, nonneg=True)
    prob = cp.Problem(cp.Minimize(cp.sum_squares(v)), [a @ v == b])
    prob.solve(solver=cp.CLARABEL)
    assert prob.status == "optimal"
    assert ok
    assert np.allclose(x, v.value, atol=1e-4)


def test_direct_on_unique_examples():
    res = solve_direct(build_system(load_pd("unique_attack.pd"), "pcwa"))
    assert res.converged and np.allclose(res.dist.probs, [0.02, 0.18, 0.8, 0.0], atol=1e-9)
    with pytest.raises(SingularSystemError):
        solve_direct(build_system(load_pd("inconsistent.pd"), "owa"))


def test_direct_reports_box_violation():
    # underdetermined system whose min-norm least-squares point is negative
    from pdreason.constraints import LinearSystem

    sys_ = LinearSystem(np.array([[1.0, 1.0], [1.0, -1.0]]), np.array([1.0, 3.0]), ("a", "b"), 2)
    res = solve_direct(sys_)
    assert not res.converged and res.status == "box-violation"


def test_linear_entropy_stationary_point():
    sys_ = build_owa(load_pd("modus_ponens.pd"))
    res = solve_max_linear_entropy(sys_)
    assert res.status == "ok"
    assert np.allclose(res.dist.probs, [0.1, 0.08, 0.1, 0.72], atol=1e-9)
    assert np.allclose(res.multipliers, [-0.64, 0.556, 0.1], atol=1e-9)
    aug = build_lagrange_augmented(sys_)
    assert aug.residual(res.solution) < 1e-12


def test_linear_entropy_box_fallback_stays_feasible():
    sys_ = build_system(load_pd("open_vs_closed.pd"), "pcwa")
    res = solve_max_linear_entropy(sys_)
    assert res.converged and res.status == "box-fallback"
    assert sys_.residual(res.dist.probs) < 1e-9 and res.dist.probs.min() >= 0


def test_sgd_converges_and_is_seeded():
    sys_ = build_owa(load_pd("modus_ponens.pd"))
    a = solve_sgd(sys_, SolverConfig(seed=3))
    b = solve_sgd(sys_, SolverConfig(seed=3))
    assert a.converged and a.residual <= 1e-3
    assert np.array_equal(a.dist.probs, b.dist.probs) and a.epochs_used == b.epochs_used


def test_sgd_gives_up_on_inconsistent_rules():
    sys_ = build_owa(load_pd("not_satisfiable.pd"))
    res = solve_sgd(sys_, SolverConfig(max_epochs=300))
    assert not res.converged and res.status == "not-converged" and res.epochs_used == 300


def test_sgd_on_augmented_system():
    sys_ = build_owa(load_pd("modus_ponens.pd"))
    res = solve_max_linear_entropy(sys_, SolverConfig(tol=1e-4), backend="sgd")
    assert res.converged
    assert np.allclose(res.dist.probs, [0.1, 0.08, 0.1, 0.72], atol=5e-3)


def test_sgd_minibatches_and_seeds():
    sys_ = build_owa(load_pd("two_heads.pd"))
    for seed in range(5):
        res = solve_sgd(sys_, SolverConfig(seed=seed, batch_size=2, momentum=0.5))
        assert res.converged, seed
    full = [solve_sgd(sys_, SolverConfig(seed=s)).epochs_used for s in range(3)]
    assert len(set(full)) == 1  # a single full batch ignores the shuffle


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(tol=0)
    with pytest.raises(ValueError):
        SolverConfig(momentum=1.0)
    with pytest.raises(ValueError):
        SolverConfig(max_epochs=0)
    with pytest.raises(ValueError):
        SolverConfig(batch_size=0)


def test_lp_feasibility_and_bounds():
    fw = load_pd("two_heads.pd")
    sys_ = build_system(fw, "owa")
    assert is_feasible(sys_)
    s0 = [Literal(fw.atom("s0"))]
    assert optimize_bounds(sys_, s0, "min") == pytest.approx(0.42, abs=1e-9)
    assert optimize_bounds(sys_, s0, "max") == pytest.approx(0.7, abs=1e-9)
    assert not is_feasible(build_owa(load_pd("not_satisfiable.pd")))
    with pytest.raises(InfeasibleError):
        optimize_bounds(build_owa(load_pd("not_satisfiable.pd")), s0, "max")
    assert solve_lp(build_owa(load_pd("not_satisfiable.pd"))).status == "infeasible"


def test_l1_relaxation_matches_cvxpy():
    sys_ = build_owa(load_pd("inconsistent.pd"))
    res = solve_l1_relaxed(sys_)
    x = cp.Variable(4, nonneg=True)
    prob = cp.Problem(cp.Minimize(cp.norm1(sys_.a[:-1] @ x - sys_.b[:-1])), [cp.sum(x) == 1])
    prob.solve(solver=cp.CLARABEL)
    assert res.objective == pytest.approx(prob.value, abs=1e-6)
    assert res.dist.probs.sum() == pytest.approx(1.0)
