import numpy as np
import pytest
from hypothesis import given, strategies as st

from projconst import (
    PhiProblem,
    PhiState,
    construct_known_system,
    kkt_diagnostics,
    maximize_phi,
    phi_objective,
    projected_hessian_check,
    projection_bound,
    state_from_system,
)
from projconst.errors import DomainError, PreconditionError, ShapeError
from projconst.linalg import polar_factor
from projconst.phi import lagrangian_hessian


def random_state(seed, N, n, field="real"):
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((N, n))
    if field == "complex":
        Z = Z + 1j * rng.standard_normal((N, n))
    L = np.abs(rng.standard_normal(N))
    return PhiState.from_arrays(field, polar_factor(Z), L / np.linalg.norm(L))


# --- objective ------------------------------------------------------------------

@pytest.mark.parametrize("field,n", [("real", 2), ("real", 3), ("complex", 2), ("complex", 3)])
def test_extremal_system_attains_bound(field, n):
    state = state_from_system(construct_known_system(n, field))
    assert state.orthonormality_residual < 1e-12
    assert phi_objective(state) == pytest.approx(projection_bound(n, field), abs=1e-12)


def test_objective_brute_force():
    state = random_state(0, 5, 2)
    Z, L = state.Z, state.Lambda
    total = sum(abs(Z[s] @ Z[t]) * L[s] * L[t] for s in range(5) for t in range(5))
    assert phi_objective(state) == pytest.approx(total, rel=1e-13)


@given(st.integers(0, 10 ** 6), st.integers(1, 4), st.integers(0, 4), st.sampled_from(["real", "complex"]))
def test_objective_bounds_on_random_states(seed, n, extra, field):
    state = random_state(seed, n + extra, n, field)
    value = phi_objective(state)
    assert value > 0
    assert value <= projection_bound(n, field) + 1e-9


# --- optimizer ------------------------------------------------------------------

@pytest.mark.parametrize("n,N,target", [(1, 5, 1.0), (2, 3, 4 / 3), (3, 6, (1 + 5 ** 0.5) / 2)])
def test_maximize_reaches_known_values(n, N, target):
    state = maximize_phi(n, N, "real")
    assert target - 1e-6 <= state.objective <= target + 1e-9
    assert state.orthonormality_residual < 1e-10 and state.mass_residual < 1e-10


def test_maximize_complex_c2():
    state = maximize_phi(2, 4, "complex", restarts=8)
    assert state.objective == pytest.approx((1 + 3 ** 0.5) / 2, abs=1e-6)


def test_maximize_deterministic():
    a = maximize_phi(2, 4, "real", restarts=4, seed=7)
    b = maximize_phi(PhiProblem(2, 4, "real"), restarts=4, seed=7)
    np.testing.assert_array_equal(a.Z, b.Z)
    assert a.seed == 7


def test_monotone_in_N():
    values = [maximize_phi(2, N, "real", restarts=8).objective for N in range(2, 7)]
    assert all(b >= a - 1e-7 for a, b in zip(values, values[1:]))
    assert max(values) <= projection_bound(2, "real") + 1e-9


def test_trivial_case_n_equals_N_one():
    state = maximize_phi(1, 1, "real", restarts=1)
    assert state.objective == pytest.approx(1.0)
    check = projected_hessian_check(state)
    assert check.tangent_dimension == 0 and check.passed()


# --- first order ----------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3])
def test_kkt_at_extremal_states(n):
    d = kkt_diagnostics(state_from_system(construct_known_system(n, "real")))
    assert d.eigen_residual < 1e-12
    assert d.alpha_spread < 1e-12
    assert d.square_function_spread() < 1e-12
    assert d.connectivity
    # the multipliers sum to the objective, so beta / alpha equals n
    assert d.beta_over_alpha == pytest.approx(n, abs=1e-12)


@given(st.integers(0, 10 ** 6), st.integers(1, 3), st.integers(0, 3), st.sampled_from(["real", "complex"]))
def test_beta_is_sum_of_alphas(seed, n, extra, field):
    d = kkt_diagnostics(random_state(seed, n + extra, n, field))
    assert d.beta == pytest.approx(d.alpha_eigs.sum(), rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("n,N", [(2, 3), (3, 6)])
def test_optimizer_states_satisfy_kkt(n, N):
    d = kkt_diagnostics(maximize_phi(n, N, "real"))
    assert d.eigen_residual < 1e-5
    assert d.alpha_spread < 1e-5
    assert d.square_function_spread() < 1e-3 * n ** 0.5


def test_non_saturated_maximizer_has_unequal_multipliers():
    # (n, N) = (4, 10) has a strict local maximizer above the R^4 family value
    # whose multipliers differ and whose square function is not constant
    state = maximize_phi(4, 10, "real")
    assert state.objective > 1.8495
    d = kkt_diagnostics(state)
    assert d.eigen_residual < 1e-6
    assert d.alpha_spread > 0.05
    assert d.square_function_spread() > 0.01
    assert projected_hessian_check(state).passed()


def test_kkt_refuses_infeasible_state():
    bad = PhiState.from_arrays("real", np.ones((3, 2)), np.ones(3) / 3 ** 0.5)
    with pytest.raises(PreconditionError):
        kkt_diagnostics(bad)


# --- second order ---------------------------------------------------------------

def lagrangian(x, N, n, alphas, beta):
    Z, L = x[:N * n].reshape(n, N).T, x[N * n:]
    F = L @ np.abs(Z @ Z.T) @ L
    return F / 2 - alphas @ ((Z ** 2).sum(axis=0) - 1) / 2 - beta * (L @ L - 1) / 2


def test_hessian_matches_finite_differences():
    rng = np.random.default_rng(3)
    N, n = 4, 2
    Z, L = rng.standard_normal((N, n)), np.abs(rng.standard_normal(N)) + 0.5
    alphas, beta = rng.standard_normal(n), rng.standard_normal()
    x0 = np.concatenate([Z.T.ravel(), L])
    h = 1e-4
    dim = x0.size
    H_fd = np.zeros((dim, dim))
    E = np.eye(dim) * h
    for i in range(dim):
        for j in range(dim):
            H_fd[i, j] = (lagrangian(x0 + E[i] + E[j], N, n, alphas, beta)
                          - lagrangian(x0 + E[i] - E[j], N, n, alphas, beta)
                          - lagrangian(x0 - E[i] + E[j], N, n, alphas, beta)
                          + lagrangian(x0 - E[i] - E[j], N, n, alphas, beta)) / (4 * h * h)
    np.testing.assert_allclose(lagrangian_hessian(Z, L, alphas, beta), H_fd, atol=1e-6)


@pytest.mark.parametrize("n", [2, 3])
def test_extremal_states_are_second_order_maxima(n):
    check = projected_hessian_check(state_from_system(construct_known_system(n, "real")))
    assert check.max_tangent_eigenvalue <= 1e-6
    assert check.tangent_dimension > 0


def test_hessian_check_refusals():
    with pytest.raises(PreconditionError):
        projected_hessian_check(state_from_system(construct_known_system(2, "complex")))
    with pytest.raises(PreconditionError):
        projected_hessian_check(random_state(0, 5, 2))
    # orthonormal basis: critical, but the off-diagonal inner products vanish
    with pytest.raises(PreconditionError):
        projected_hessian_check(PhiState.from_arrays("real", np.eye(2), np.ones(2) / 2 ** 0.5))


def test_errors():
    with pytest.raises(DomainError):
        PhiProblem(3, 2)
    with pytest.raises(DomainError):
        maximize_phi(2, 3, restarts=0)
    with pytest.raises(ShapeError):
        PhiState.from_arrays("real", np.eye(2), np.ones(3))
