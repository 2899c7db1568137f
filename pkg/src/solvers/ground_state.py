import logging
import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from solvers.mode_solver import ModeBasis
from utils.errors import NotNormalizable, SingularUp

ArrayLike = Union[float, np.ndarray]

# |Det U_p| below this fraction of ||U_p||^2 is treated as singular.
SINGULAR_TOL = 1e-12
# Relative size allowed for Im(Lambda_jj) and Re(Lambda_12) in static states.
PURITY_TOL = 1e-10


@dataclass(frozen=True)
class GaussianGroundState:
    """
    psi(x) = norm * exp(-x' Lambda x / 2) with Lambda the symmetrized 2x2
    complex matrix; only the symmetric part enters psi.
    """
    Lambda: np.ndarray
    norm: float
    hbar: float = 1.0

    @property
    def Lambda11(self) -> complex:
        return complex(self.Lambda[0, 0])

    @property
    def Lambda22(self) -> complex:
        return complex(self.Lambda[1, 1])

    @property
    def Lambda12c(self) -> float:
        """Imaginary part of the symmetrized off-diagonal entry"""
        return float(self.Lambda[0, 1].imag)

    @property
    def Lambda_r(self) -> np.ndarray:
        return self.Lambda.real.copy()

    @property
    def Lambda_c(self) -> np.ndarray:
        return self.Lambda.imag.copy()


class GroundStateSolver:
    """
    Solves the annihilation conditions (U_x x - i hbar U_p d/dx) psi = 0
    for the two-mode Gaussian ground state.
    """

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def ground_state(self, basis: ModeBasis, hbar: float = 1.0) -> GaussianGroundState:
        """
        Build Lambda = (i/hbar) U_p^-1 U_x and normalize the state.

        Args:
            basis: normal-mode basis of the commutative Hamiltonian
            hbar: action scale

        Returns:
            GaussianGroundState with symmetrized Lambda

        Raises:
            SingularUp: when U_p is not invertible
            NotNormalizable: when Re(Lambda) is not positive definite
        """
        Up, Ux = basis.Up, basis.Ux
        det_up = np.linalg.det(Up)
        if abs(det_up) <= SINGULAR_TOL * max(np.linalg.norm(Up) ** 2, np.finfo(float).tiny):
            raise SingularUp(f"|Det U_p| = {abs(det_up):.3e} is numerically zero")

        raw = (1j / hbar) * np.linalg.solve(Up, Ux)
        asymmetry = abs(raw[0, 1] - raw[1, 0])
        scale = abs(raw[0, 0])
        if asymmetry > PURITY_TOL * scale:
            self.logger.warning(f"Lambda12 and Lambda21 differ by {asymmetry:.3e}")

        Lambda = 0.5 * (raw + raw.T)
        if max(abs(Lambda[0, 0].imag), abs(Lambda[1, 1].imag), abs(Lambda[0, 1].real)) > PURITY_TOL * scale:
            self.logger.warning(f"Lambda deviates from real-diagonal / imaginary off-diagonal form: {Lambda}")

        state = self.from_lambda(Lambda, hbar)
        self.logger.debug(f"Ground state Lambda11={state.Lambda11.real:.12g}, "
                          f"Lambda22={state.Lambda22.real:.12g}, Lambda12c={state.Lambda12c:.6g}")
        return state

    def from_lambda(self, Lambda: np.ndarray, hbar: float = 1.0) -> GaussianGroundState:
        """Normalized state from a given complex symmetric Lambda"""
        Lambda = np.asarray(Lambda, dtype=complex)
        Lambda = 0.5 * (Lambda + Lambda.T)
        provisional = GaussianGroundState(Lambda=Lambda, norm=1.0, hbar=hbar)
        return GaussianGroundState(Lambda=Lambda, norm=self.normalization(provisional), hbar=hbar)

    def normalization(self, state: GaussianGroundState) -> float:
        """
        N0 = (Det Lambda_r)^(1/4) / sqrt(pi), so that |psi|^2 integrates to 1.

        Raises:
            NotNormalizable: when Lambda_r is not positive definite
        """
        Lambda_r = state.Lambda_r
        eigenvalues = np.linalg.eigvalsh(Lambda_r)
        if np.any(eigenvalues <= 0) or not np.all(np.isfinite(eigenvalues)):
            raise NotNormalizable(f"Re(Lambda) has eigenvalues {eigenvalues}")
        return float(np.linalg.det(Lambda_r) ** 0.25 / math.sqrt(math.pi))

    def evaluate_psi(self, state: GaussianGroundState, x1: ArrayLike, x2: ArrayLike) -> np.ndarray:
        """Amplitude N0 exp(-x' Lambda x / 2); broadcasts over array inputs"""
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        L = state.Lambda
        exponent = L[0, 0] * x1 ** 2 + 2.0 * L[0, 1] * x1 * x2 + L[1, 1] * x2 ** 2
        return state.norm * np.exp(-0.5 * exponent)

    def symmetrized_lambda12_forms(self, basis: ModeBasis, hbar: float = 1.0) -> Tuple[float, float]:
        """
        Lambda12c from the two closed expressions, one from each
        off-diagonal entry of U_p^-1 U_x.

        Returns:
            (form via kappa_3/kappa_4, form via kappa_1/kappa_2)
        """
        k = basis.kappa
        # kappa_ij -> k[j-1, i-1]
        d = hbar * (k[0, 1] * k[1, 3] - k[1, 1] * k[0, 3])
        upper = (k[1, 3] * k[0, 2] - k[0, 3] * k[1, 2]) / d
        lower = (k[0, 1] * k[1, 0] - k[1, 1] * k[0, 0]) / d
        return float(upper), float(lower)

    def closed_form_diagonal(self, basis: ModeBasis, hbar: float = 1.0) -> Tuple[float, float]:
        """Lambda11 and Lambda22 written directly in the kappa entries"""
        k = basis.kappa
        d = hbar * (k[0, 1] * k[1, 3] - k[1, 1] * k[0, 3])
        lambda11 = (k[0, 3] * k[1, 0] - k[1, 3] * k[0, 0]) / d
        lambda22 = (k[0, 1] * k[1, 2] - k[1, 1] * k[0, 2]) / d
        return float(lambda11), float(lambda22)
