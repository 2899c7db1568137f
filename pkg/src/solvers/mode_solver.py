import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from mappers.hamiltonian_mapper import CommHamiltonian
from phasespace.bopp_shift import J2, J4
from utils.errors import DecoupledFallback, DegenerateSpectrum, InvalidParameters, NormalizationFailure

SIGMA_Y = np.kron(np.eye(2), np.array([[0.0, -1.0j], [1.0j, 0.0]]))

# D below this fraction of Delta counts as a coinciding pair of frequencies.
DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class QuadraticForm:
    """Matrix H with H_ancs = X' H X / 2 in (x1, p1, x2, p2) ordering"""
    H: np.ndarray

    @property
    def A(self) -> np.ndarray:
        return self.H[:2, :2]

    @property
    def B(self) -> np.ndarray:
        return self.H[2:, 2:]

    @property
    def C(self) -> np.ndarray:
        return self.H[:2, 2:]


@dataclass(frozen=True)
class ModeSpectrum:
    """Symplectic frequencies lambda1 <= lambda2 and the invariants behind them"""
    lambda1: float
    lambda2: float
    Delta: float
    DeltaOmega: float
    D: float


@dataclass(frozen=True)
class ModeBasis:
    """
    Normal-mode data: kappa[j] holds (kappa_1j .. kappa_4j) of mode j,
    k[j] its normalizer, Qinv rows the left eigenvectors
    (chi_l1, chi_l1*, chi_l2, chi_l2*) and Q the matching right eigenvectors.
    """
    kappa: np.ndarray
    k: np.ndarray
    Q: np.ndarray
    Qinv: np.ndarray
    spectrum: ModeSpectrum
    decoupled: bool = False

    @property
    def Ux(self) -> np.ndarray:
        """Position block of the annihilation conditions (rows: modes)"""
        return np.array([[1j * self.kappa[j, 0], self.kappa[j, 2]] for j in range(2)])

    @property
    def Up(self) -> np.ndarray:
        """Momentum block of the annihilation conditions (rows: modes)"""
        return np.array([[self.kappa[j, 1], 1j * self.kappa[j, 3]] for j in range(2)])


class ModeSolver:
    """
    Symplectic diagonalization of the two-mode commutative Hamiltonian.
    Closed-form spectrum and eigenvectors, with an analytic fallback
    for decoupled oscillators.
    """

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def quadratic_form(self, h: CommHamiltonian) -> QuadraticForm:
        """Blocks A = diag(mu1 w1^2, 1/mu1), B = diag(mu2 w2^2, 1/mu2), C = 2[[0,-nu2],[nu1,0]]"""
        A = np.diag([h.alpha1, 1.0 / h.mu1])
        B = np.diag([h.alpha2, 1.0 / h.mu2])
        C = 2.0 * np.array([[0.0, -h.nu2], [h.nu1, 0.0]])
        return QuadraticForm(H=np.block([[A, C], [C.T, B]]))

    def build_omega(self, h: CommHamiltonian) -> np.ndarray:
        """Omega = J H, whose eigenvalues are -+i lambda_j"""
        return J4 @ self.quadratic_form(h).H

    def printed_discriminant(self, h: CommHamiltonian) -> float:
        """Expanded form of D^2 in the oscillator parameters"""
        w1, w2 = h.omega1, h.omega2
        ratio = math.sqrt(h.mu1 / h.mu2)
        return ((w1 ** 2 - w2 ** 2) ** 2
                + 16.0 * h.nu1 * h.nu2 * (w1 - w2) ** 2
                + 16.0 * (ratio * w1 * h.nu1 + w2 * h.nu2 / ratio) ** 2)

    def symplectic_eigenvalues(self, h: CommHamiltonian) -> ModeSpectrum:
        """
        Closed-form symplectic frequencies from the biquadratic P(l) = l^4 + Delta l^2 + Det(Omega).

        Args:
            h: commutative Hamiltonian

        Returns:
            ModeSpectrum with lambda1 <= lambda2

        Raises:
            DegenerateSpectrum: when D is below DEGENERACY_TOL * Delta
        """
        form = self.quadratic_form(h)
        delta = (np.linalg.det(J2 @ form.A) + np.linalg.det(J2 @ form.B)
                 + 2.0 * np.linalg.det(J2 @ form.C))
        delta_omega = float(np.linalg.det(J4 @ form.H))
        d_squared = delta ** 2 - 4.0 * delta_omega

        printed = self.printed_discriminant(h)
        if not math.isclose(printed, d_squared, rel_tol=1e-9, abs_tol=1e-12 * delta ** 2):
            self.logger.warning(f"Expanded discriminant {printed:.12g} disagrees with Delta^2-4Det = {d_squared:.12g}")

        if delta_omega <= 0:
            raise InvalidParameters(f"Hamiltonian is not positive definite (Det Omega = {delta_omega:.3e})")

        D = math.sqrt(max(d_squared, 0.0))
        if D < DEGENERACY_TOL * delta:
            raise DegenerateSpectrum(f"D = {D:.3e} is degenerate relative to Delta = {delta:.3e}")

        lambda2 = math.sqrt((delta + D) / 2.0)
        # Same root as sqrt((Delta - D)/2), free of cancellation.
        lambda1 = math.sqrt(2.0 * delta_omega / (delta + D))
        self.logger.debug(f"Spectrum lambda1={lambda1:.12g}, lambda2={lambda2:.12g}, D={D:.6g}")
        return ModeSpectrum(lambda1, lambda2, float(delta), delta_omega, D)

    def _kappa(self, h: CommHamiltonian, lam: float) -> np.ndarray:
        """Real entries of the left eigenvector (i k1, k2, k3, i k4) for -i lam"""
        mu1, mu2, nu1, nu2 = h.mu1, h.mu2, h.nu1, h.nu2
        w1s, w2s = h.omega1 ** 2, h.omega2 ** 2
        return np.array([
            -2.0 * mu1 * lam * (mu1 * nu1 * w1s + mu2 * nu2 * w2s),
            2.0 * (mu2 * nu2 * w2s - 4.0 * mu1 * nu1 ** 2 * nu2 + mu1 * nu1 * lam ** 2),
            mu1 * (4.0 * mu1 * nu1 ** 2 * w1s - mu2 * w1s * w2s + mu2 * w2s * lam ** 2),
            -mu1 * lam * (w1s + 4.0 * nu1 * nu2 - lam ** 2),
        ])

    def _assemble(self, kappa: np.ndarray, k: np.ndarray, spectrum: ModeSpectrum,
                  decoupled: bool) -> ModeBasis:
        """Left rows and right columns from kappa; chi_r = -Sigma_y chi_l^dagger"""
        left = [k[j] * np.array([1j * kappa[j, 0], kappa[j, 1], kappa[j, 2], 1j * kappa[j, 3]])
                for j in range(2)]
        right = [-SIGMA_Y @ chi.conj() for chi in left]
        Qinv = np.vstack([left[0], left[0].conj(), left[1], left[1].conj()])
        Q = np.column_stack([right[0], right[0].conj(), right[1], right[1].conj()])
        return ModeBasis(kappa=kappa, k=k, Q=Q, Qinv=Qinv, spectrum=spectrum, decoupled=decoupled)

    def mode_basis(self, h: CommHamiltonian, s: ModeSpectrum) -> ModeBasis:
        """
        Closed-form diagonalizing basis of Omega.

        Args:
            h: commutative Hamiltonian with at least one nonzero coupling
            s: its spectrum

        Returns:
            ModeBasis with Q^-1 Omega Q = diag(-i l1, i l1, -i l2, i l2)

        Raises:
            DecoupledFallback: when nu1 = nu2 = 0
            NormalizationFailure: when a mode has nonpositive symplectic norm
        """
        if h.is_decoupled:
            raise DecoupledFallback("closed-form kappa vanish for uncoupled oscillators")

        kappa = np.vstack([self._kappa(h, s.lambda1), self._kappa(h, s.lambda2)])
        norms = kappa[:, 2] * kappa[:, 3] - kappa[:, 0] * kappa[:, 1]
        if not np.all(np.isfinite(norms)) or np.any(norms <= 0):
            raise NormalizationFailure(f"mode norms k3k4 - k1k2 = {norms} must be positive")

        k = 1.0 / np.sqrt(2.0 * norms)
        return self._assemble(kappa, k, s, decoupled=False)

    def decoupled_basis(self, h: CommHamiltonian, s: ModeSpectrum) -> ModeBasis:
        """Single-mode ladder coefficients, modes ordered by frequency"""
        rows = []
        for mu, omega, slot in ((h.mu1, h.omega1, 0), (h.mu2, h.omega2, 1)):
            a = math.sqrt(mu * omega / 2.0)
            b = 1.0 / math.sqrt(2.0 * mu * omega)
            # Oscillator 1 carries i*kappa on x1, oscillator 2 carries it on p2.
            rows.append((omega, np.array([-a, b, 0.0, 0.0]) if slot == 0 else np.array([0.0, 0.0, a, b])))
        rows.sort(key=lambda item: item[0])
        kappa = np.vstack([row for _, row in rows])
        return self._assemble(kappa, np.ones(2), s, decoupled=True)

    def solve(self, h: CommHamiltonian) -> Tuple[ModeSpectrum, ModeBasis]:
        """Spectrum and basis, taking the decoupled fallback when needed"""
        spectrum = self.symplectic_eigenvalues(h)
        try:
            basis = self.mode_basis(h, spectrum)
        except DecoupledFallback as e:
            self.logger.info(f"Using decoupled ladder basis: {e}")
            basis = self.decoupled_basis(h, spectrum)
        return spectrum, basis
