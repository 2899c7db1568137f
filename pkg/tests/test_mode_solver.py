import numpy as np
import pytest

from conftest import random_anisotropic_spec
from mappers.hamiltonian_mapper import CommHamiltonian
from solvers.mode_solver import ModeSolver
from utils.errors import DecoupledFallback, DegenerateSpectrum, InvalidParameters


@pytest.fixture
def solver():
    return ModeSolver()


def test_isotropic_frequencies(solver, mapper, iso_spec):
    s = solver.symplectic_eigenvalues(mapper.to_commutative(iso_spec))
    assert s.lambda1 == pytest.approx(0.9025, rel=1e-12)
    assert s.lambda2 == pytest.approx(1.1025, rel=1e-12)
    assert s.D == pytest.approx(8 * 1.0025 * 0.05, rel=1e-10)


def test_spectrum_matches_numeric_eigenvalues(solver, mapper, rng):
    for _ in range(50):
        h = mapper.to_commutative(random_anisotropic_spec(rng))
        s = solver.symplectic_eigenvalues(h)
        numeric = np.sort(np.abs(np.linalg.eigvals(solver.build_omega(h)).imag))[::2]
        np.testing.assert_allclose([s.lambda1, s.lambda2], numeric, rtol=1e-10)


def test_printed_discriminant_matches(solver, mapper, rng):
    for _ in range(20):
        h = mapper.to_commutative(random_anisotropic_spec(rng))
        s = solver.symplectic_eigenvalues(h)
        assert solver.printed_discriminant(h) == pytest.approx(s.D ** 2, rel=1e-9)


def test_basis_diagonalizes_omega(solver, mapper, aniso_spec):
    h = mapper.to_commutative(aniso_spec)
    s, basis = solver.solve(h)
    assert not basis.decoupled
    np.testing.assert_allclose(basis.Qinv @ basis.Q, np.eye(4), atol=1e-12)
    expected = np.diag([-1j * s.lambda1, 1j * s.lambda1, -1j * s.lambda2, 1j * s.lambda2])
    np.testing.assert_allclose(basis.Qinv @ solver.build_omega(h) @ basis.Q, expected, atol=1e-12)


def test_left_eigenvectors(solver, mapper, rng):
    for _ in range(20):
        h = mapper.to_commutative(random_anisotropic_spec(rng))
        s, basis = solver.solve(h)
        omega = solver.build_omega(h)
        for row, lam in ((0, s.lambda1), (2, s.lambda2)):
            chi = basis.Qinv[row]
            np.testing.assert_allclose(chi @ omega, -1j * lam * chi, atol=1e-12)


def test_decoupled_fallback(solver):
    h = CommHamiltonian(mu1=1.0, mu2=1.0, alpha1=1.0, alpha2=4.0, nu1=0.0, nu2=0.0)
    s = solver.symplectic_eigenvalues(h)
    with pytest.raises(DecoupledFallback):
        solver.mode_basis(h, s)
    s, basis = solver.solve(h)
    assert basis.decoupled
    assert (s.lambda1, s.lambda2) == pytest.approx((1.0, 2.0))
    np.testing.assert_allclose(basis.Qinv @ basis.Q, np.eye(4), atol=1e-14)


def test_decoupled_modes_sorted_by_frequency(solver):
    h = CommHamiltonian(mu1=1.0, mu2=1.0, alpha1=9.0, alpha2=1.0, nu1=0.0, nu2=0.0)
    s, basis = solver.solve(h)
    omega = solver.build_omega(h)
    np.testing.assert_allclose(basis.Qinv[0] @ omega, -1j * s.lambda1 * basis.Qinv[0], atol=1e-14)
    assert s.lambda1 == pytest.approx(1.0)


def test_degenerate_spectrum(solver):
    h = CommHamiltonian(mu1=1.0, mu2=1.0, alpha1=1.0, alpha2=1.0, nu1=0.0, nu2=0.0)
    with pytest.raises(DegenerateSpectrum):
        solver.symplectic_eigenvalues(h)


def test_non_positive_hamiltonian(solver):
    h = CommHamiltonian(mu1=1.0, mu2=1.0, alpha1=0.0, alpha2=1.0, nu1=0.0, nu2=0.0)
    with pytest.raises(InvalidParameters):
        solver.symplectic_eigenvalues(h)
