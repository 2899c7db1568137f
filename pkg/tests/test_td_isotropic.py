import math

import numpy as np
import pytest

from analyzers.covariance_builder import CovarianceBuilder
from analyzers.separability_analyzer import SeparabilityAnalyzer
from oracles.pinney_oracle import pinney_sigma
from oracles.quartic_oracle import QuarticOracle
from phasespace.bopp_shift import NCParams
from solvers.ground_state import GroundStateSolver
from solvers.td_isotropic import EPNode, IsotropicTDParams, TDIsotropicSolver
from utils.errors import InvalidParameters, SigmaCollapse, StepRejection


@pytest.fixture
def solver():
    return TDIsotropicSolver(step_tol=1e-10)


@pytest.fixture
def static(mapper):
    mu0, alpha, nu = mapper.isotropic_commutative(1.0, 1.0, NCParams(0.1, 0.1, 1.0))
    return IsotropicTDParams.constant(mu0, alpha, nu, kappa=1.0)


@pytest.fixture
def driven(mapper):
    mu0, alpha, nu = mapper.isotropic_commutative(1.0, 1.0, NCParams(0.1, 0.1, 1.0))
    return IsotropicTDParams(
        mu0=lambda t: mu0,
        alpha=lambda t: alpha * (1.0 + 0.1 * math.sin(1.3 * t)),
        nu=lambda t: nu,
        kappa=1.0,
    )


def test_invariant_spectrum(solver):
    assert solver.invariant_spectrum(2.0, 1.0) == (1.0, 3.0)
    assert solver.invariant_spectrum(1.5, 0.0) == (1.5, 1.5)
    with pytest.raises(InvalidParameters):
        solver.invariant_spectrum(1.0, -1.0)


def test_invalid_params():
    with pytest.raises(InvalidParameters):
        IsotropicTDParams.constant(1.0, 1.0, 0.0, kappa=1.0, l=1.0)
    with pytest.raises(InvalidParameters):
        IsotropicTDParams.constant(1.0, 1.0, 0.0, kappa=0.0)


def test_invariant_matrix_eigenvalues(solver):
    a, c, kappa, l = 1.7, -0.4, 1.2, 0.5
    b = (c ** 2 + kappa ** 2) / a
    H = solver.invariant_matrix(a, b, c, l)
    J = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    oracle = QuarticOracle()
    freqs = oracle.symplectic_frequencies(oracle.characteristic_polynomial(J @ H))
    assert freqs == pytest.approx((kappa - l, kappa + l), rel=1e-10)


def test_equilibrium_is_fixed(solver, static):
    traj = solver.integrate_ep(static, None, 0.0, 10.0, 1e-2)
    sigma_eq = solver.static_equilibrium_sigma(static)
    np.testing.assert_allclose(traj.sigma, sigma_eq, rtol=1e-10)
    a, b, c = solver.invariant_coeffs(traj)
    np.testing.assert_allclose(c, 0.0, atol=1e-10)
    np.testing.assert_allclose(b, 1.0 / sigma_eq ** 2, rtol=1e-10)

    state = solver.td_ground_state(traj.node(len(traj) - 1), static)
    mu0, alpha = static.mu0(0.0), static.alpha(0.0)
    assert state.Lambda11.real == pytest.approx(math.sqrt(mu0 * alpha), rel=1e-9)
    assert abs(state.Lambda11.imag) < 1e-9


def test_matches_pinney_superposition(solver, static):
    traj = solver.integrate_ep(static, 1.3, 0.2, 15.0, 1e-2)
    mu0, alpha = static.mu0(0.0), static.alpha(0.0)
    expected = pinney_sigma(mu0, alpha, 1.0, 1.3, 0.2, traj.t)
    np.testing.assert_allclose(traj.sigma, expected, rtol=1e-8)


def test_driven_drift(solver, driven):
    traj = solver.integrate_ep(driven, 1.1, 0.0, 20.0, 1e-3)
    assert traj.kappa_drift.max() <= 1e-8
    a, b, c = solver.invariant_coeffs(traj)
    np.testing.assert_allclose(c ** 2 - a * b, -1.0, atol=1e-12)


def test_fourth_order_convergence(driven):
    ratio = TDIsotropicSolver(step_tol=1.0).convergence_ratio(driven, 1.1, 0.0, 30.0, 0.08)
    assert 12.0 <= ratio <= 20.0


def test_trajectory_error_needs_refined_reference(driven):
    coarse = TDIsotropicSolver(step_tol=1.0)
    traj = coarse.integrate_ep(driven, 1.1, 0.0, 3.0, 0.1)
    same = coarse.integrate_ep(driven, 1.1, 0.0, 3.0, 0.1)
    assert coarse.trajectory_error(traj, same) == 0.0
    with pytest.raises(InvalidParameters):
        coarse.trajectory_error(traj, coarse.integrate_ep(driven, 1.1, 0.0, 3.0, 0.07))


def test_consistency_residuals(solver, static):
    traj = solver.integrate_ep(static, 1.3, 0.2, 5.0, 1e-3)
    res_a, res_c, res_b = solver.consistency_residuals(traj, static)
    assert max(res_a, res_c, res_b) < 1e-6


def test_td_state_separable_along_driven_run(solver, driven):
    traj = solver.integrate_ep(driven, 1.1, 0.3, 10.0, 1e-2)
    builder = CovarianceBuilder()
    analyzer = SeparabilityAnalyzer()
    for i in range(0, len(traj), 50):
        state = solver.td_ground_state(traj.node(i), driven)
        assert state.Lambda12c == 0.0
        cov = builder.covariance(state)
        assert abs(analyzer.simon_ps(cov)) < 1e-8
        assert builder.rsup_check(cov.V, cov.hbar) >= -1e-10


def test_factorization(solver, driven):
    traj = solver.integrate_ep(driven, 1.1, 0.3, 5.0, 1e-2)
    state = solver.td_ground_state(traj.node(len(traj) // 2), driven)
    assert solver.factorization_check(state) < 1e-12

    corrupted = GroundStateSolver().from_lambda(np.array([[1.0, 0.1j], [0.1j, 1.0]]))
    assert solver.factorization_check(corrupted) > 1e-3


def test_sigma_collapse(static):
    coarse = TDIsotropicSolver(step_tol=1.0)
    with pytest.raises(SigmaCollapse) as info:
        coarse.integrate_ep(static, 1.0, -100.0, 5.0, 1.0)
    assert info.value.last_good_time == 0.0


def test_td_ground_state_rejects_bad_sigma(solver, static):
    with pytest.raises(SigmaCollapse):
        solver.td_ground_state(EPNode(t=1.0, sigma=0.0, sigmadot=0.0, mu0=1.0), static)


def test_step_rejection(static):
    strict = TDIsotropicSolver(step_tol=1e-30, max_depth=2)
    with pytest.raises(StepRejection):
        strict.integrate_ep(static, 1.3, 0.2, 1.0, 0.5)


def test_tabulated_params_match_constant(solver, static):
    t = np.linspace(0.0, 6.0, 61)
    tabulated = IsotropicTDParams.from_samples(
        t, np.full_like(t, static.mu0(0.0)), np.full_like(t, static.alpha(0.0)),
        np.full_like(t, static.nu(0.0)), kappa=1.0,
    )
    a = solver.integrate_ep(tabulated, 1.3, 0.2, 5.0, 1e-2)
    b = solver.integrate_ep(static, 1.3, 0.2, 5.0, 1e-2)
    np.testing.assert_allclose(a.sigma, b.sigma, rtol=1e-12)
