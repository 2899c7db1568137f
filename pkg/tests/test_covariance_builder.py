import math

import numpy as np
import pytest

from analyzers.covariance_builder import (
    CovarianceBuilder, CovarianceMatrix, reorder_to_mode_major, reorder_to_quadrature_major,
)
from conftest import random_anisotropic_spec
from phasespace.bopp_shift import NCParams
from solvers.ground_state import GroundStateSolver


@pytest.fixture
def builder():
    return CovarianceBuilder()


@pytest.fixture
def states():
    return GroundStateSolver()


def test_vacuum(builder, states):
    vacuum = states.from_lambda(np.eye(2))
    np.testing.assert_allclose(builder.wigner_from_state(vacuum).LambdaM, np.eye(4), atol=1e-15)
    np.testing.assert_allclose(builder.covariance(vacuum).V, 0.5 * np.eye(4), atol=1e-15)


def test_decoupled_state(builder, states):
    state = states.from_lambda(np.diag([1.0, 2.0]))
    wigner = builder.wigner_from_state(state)
    np.testing.assert_allclose(wigner.Lambda1, np.diag([1.0, 2.0]))
    np.testing.assert_allclose(wigner.Lambda2, np.diag([1.0, 0.5]))
    np.testing.assert_allclose(wigner.Lambda12, np.zeros((2, 2)))
    assert wigner.determinant == pytest.approx(1.0)

    cov = builder.covariance(state)
    np.testing.assert_allclose(cov.V11, np.diag([0.5, 0.5]))
    np.testing.assert_allclose(cov.V22, np.diag([0.25, 1.0]))
    np.testing.assert_allclose(cov.V12, np.zeros((2, 2)))


def test_printed_sigma_forms(builder, analyzer, aniso_spec):
    state = analyzer.run_pipeline(aniso_spec).state
    l11, l22, c = state.Lambda11.real, state.Lambda22.real, state.Lambda12c
    hbar = state.hbar
    d = l11 * l22 + c ** 2
    V = builder.covariance(state).V
    sigma = 2.0 * V / hbar
    np.testing.assert_allclose(np.diag(sigma), [1 / (hbar * l11), hbar * d / l22, 1 / (hbar * l22), hbar * d / l11],
                               rtol=1e-12)
    assert sigma[0, 3] == pytest.approx(-c / l11, rel=1e-12)
    assert sigma[1, 2] == pytest.approx(-c / l22, rel=1e-12)
    assert sigma[0, 2] == pytest.approx(0.0, abs=1e-14)
    assert sigma[1, 3] == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("hbar", [1.0, 2.0])
def test_wigner_determinant(builder, analyzer, rng, hbar):
    for _ in range(20):
        state = analyzer.run_pipeline(random_anisotropic_spec(rng, hbar)).state
        wigner = builder.wigner_from_state(state)
        assert wigner.determinant == pytest.approx(hbar ** -4, rel=1e-10)
        assert np.all(np.linalg.eigvalsh(wigner.LambdaM) > 0)


def test_rsup_examples(builder, states):
    vacuum = builder.covariance(states.from_lambda(np.eye(2)))
    assert builder.rsup_check(vacuum.V, 1.0) == pytest.approx(0.0, abs=1e-15)
    assert builder.rsup_check(np.eye(4), 1.0) == pytest.approx(0.5)


def test_rsup_on_ground_states(builder, analyzer, rng):
    for _ in range(50):
        spec = random_anisotropic_spec(rng)
        cov = analyzer.run_pipeline(spec).covariance
        assert builder.rsup_check(cov.V, cov.hbar) >= -1e-10
        assert builder.nc_rsup_check(cov, spec.nc) >= -1e-10


def test_nc_covariance(builder, states):
    cov = builder.covariance(states.from_lambda(np.eye(2)))
    np.testing.assert_allclose(builder.nc_covariance(cov, NCParams(0.0, 0.0, 1.0)), cov.V)
    V_nc = builder.nc_covariance(cov, NCParams(0.2, 0.0, 1.0))
    np.testing.assert_allclose(V_nc, V_nc.T)
    # x1~ = x1 - 0.1 p2 has variance 0.5 (1 + 0.01)
    assert V_nc[0, 0] == pytest.approx(0.505)


def test_reorder_round_trip(rng):
    M = rng.normal(size=(4, 4))
    np.testing.assert_array_equal(reorder_to_quadrature_major(reorder_to_mode_major(M)), M)
    # (x1, x2, p1, p2) entry (x2, p1) lands at (x2, p1) = (2, 1) in mode-major order
    assert reorder_to_mode_major(M)[2, 1] == M[1, 2]


def test_wigner_density(builder, analyzer, aniso_spec):
    state = analyzer.run_pipeline(aniso_spec).state
    wigner = builder.wigner_from_state(state)
    assert builder.wigner_density(wigner, np.zeros(4)) == pytest.approx(1 / math.pi ** 2)
    points = np.array([[0.3, -0.2, 0.1, 0.4], [1.0, 0.0, 0.0, 0.0]])
    values = builder.wigner_density(wigner, points)
    assert values.shape == (2,)
    assert np.all((values > 0) & (values < 1 / math.pi ** 2))


def test_mutation_flips_one_correlation(builder, analyzer, aniso_spec):
    state = analyzer.run_pipeline(aniso_spec).state
    clean = builder.covariance(state).V
    mutated = builder.covariance(state, mutate=True).V
    assert mutated[0, 3] == -clean[0, 3] != 0.0
    assert mutated[3, 0] == -clean[3, 0]
    mask = np.ones((4, 4), dtype=bool)
    mask[0, 3] = mask[3, 0] = False
    np.testing.assert_array_equal(mutated[mask], clean[mask])


def test_covariance_dataclass_blocks():
    V = np.arange(16.0).reshape(4, 4)
    cov = CovarianceMatrix(V, 1.0)
    np.testing.assert_array_equal(cov.V12, [[2.0, 3.0], [6.0, 7.0]])
