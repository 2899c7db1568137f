import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from mappers.hamiltonian_mapper import XP_TO_MODE
from phasespace.bopp_shift import BoppShift, J4, NCParams
from solvers.ground_state import GaussianGroundState
from utils.errors import NotNormalizable


def reorder_to_mode_major(M: np.ndarray) -> np.ndarray:
    """(x1, x2, p1, p2) -> (x1, p1, x2, p2)"""
    return XP_TO_MODE @ M @ XP_TO_MODE.T


def reorder_to_quadrature_major(M: np.ndarray) -> np.ndarray:
    """(x1, p1, x2, p2) -> (x1, x2, p1, p2)"""
    return XP_TO_MODE.T @ M @ XP_TO_MODE


@dataclass(frozen=True)
class WignerGaussian:
    """W(X) = exp(-X' LambdaM X) / (pi^2 hbar^2) with X = (x1, x2, p1, p2)"""
    LambdaM: np.ndarray
    hbar: float = 1.0

    @property
    def Lambda1(self) -> np.ndarray:
        return self.LambdaM[:2, :2]

    @property
    def Lambda2(self) -> np.ndarray:
        return self.LambdaM[2:, 2:]

    @property
    def Lambda12(self) -> np.ndarray:
        return self.LambdaM[:2, 2:]

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.LambdaM))


@dataclass(frozen=True)
class CovarianceMatrix:
    """Symmetrized second moments in (x1, p1, x2, p2) ordering"""
    V: np.ndarray
    hbar: float = 1.0

    @property
    def V11(self) -> np.ndarray:
        return self.V[:2, :2]

    @property
    def V22(self) -> np.ndarray:
        return self.V[2:, 2:]

    @property
    def V12(self) -> np.ndarray:
        return self.V[:2, 2:]

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.V))


class CovarianceBuilder:
    """
    Phase-space description of Gaussian ground states: Wigner function,
    covariance matrix in commutative and NC coordinates, and the
    Robertson-Schroedinger checks.
    """

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self.bopp = BoppShift()

    def _real_parts(self, state: GaussianGroundState):
        Lambda_r, Lambda_c = state.Lambda_r, state.Lambda_c
        if np.any(np.linalg.eigvalsh(Lambda_r) <= 0):
            raise NotNormalizable(f"Re(Lambda) is not positive definite: {Lambda_r}")
        return Lambda_r, Lambda_c, np.linalg.inv(Lambda_r)

    def wigner_from_state(self, state: GaussianGroundState) -> WignerGaussian:
        """
        Gaussian Wigner function of a ground state.

        Args:
            state: ground state with complex symmetric Lambda

        Returns:
            WignerGaussian with blocks Lambda_r + Lc Lr^-1 Lc, Lr^-1/hbar^2, Lc Lr^-1/hbar
        """
        hbar = state.hbar
        Lambda_r, Lambda_c, inv_r = self._real_parts(state)
        block1 = Lambda_r + Lambda_c @ inv_r @ Lambda_c
        block2 = inv_r / hbar ** 2
        block12 = Lambda_c @ inv_r / hbar
        LambdaM = np.block([[block1, block12], [block12.T, block2]])
        wigner = WignerGaussian(LambdaM=0.5 * (LambdaM + LambdaM.T), hbar=hbar)
        self.logger.debug(f"Wigner determinant {wigner.determinant:.15g} (hbar^-4 = {hbar ** -4:.15g})")
        return wigner

    def covariance(self, state: GaussianGroundState, mutate: bool = False) -> CovarianceMatrix:
        """
        Closed-form covariance V = (hbar/2) sigma of a ground state.

        For a real-diagonal, imaginary off-diagonal Lambda this gives
        sigma11 = diag(1/hbar L11, hbar D/L22), sigma22 = diag(1/hbar L22, hbar D/L11)
        and sigma12 with entries -L12c/L11, -L12c/L22, D = L11 L22 + L12c^2.

        Args:
            state: ground state
            mutate: flip the sign of the (x1, p2) correlation; a deliberate
                defect used by the selftest negative control

        Returns:
            CovarianceMatrix in (x1, p1, x2, p2) ordering
        """
        hbar = state.hbar
        Lambda_r, Lambda_c, inv_r = self._real_parts(state)
        sigma_xx = inv_r / hbar
        sigma_pp = hbar * (Lambda_r + Lambda_c @ inv_r @ Lambda_c)
        sigma_xp = -inv_r @ Lambda_c
        sigma = np.block([[sigma_xx, sigma_xp], [sigma_xp.T, sigma_pp]])

        V = reorder_to_mode_major(0.5 * hbar * sigma)
        V = 0.5 * (V + V.T)
        if mutate:
            self.logger.warning("Covariance mutation enabled: flipping the x1-p2 correlation")
            V[0, 3] = -V[0, 3]
            V[3, 0] = -V[3, 0]
        return CovarianceMatrix(V=V, hbar=hbar)

    def nc_covariance(self, cov: CovarianceMatrix, nc: NCParams) -> np.ndarray:
        """Covariance of the NC coordinates, Upsilon V Upsilon'"""
        upsilon = self.bopp.darboux_map(nc).Upsilon
        V_nc = upsilon @ cov.V @ upsilon.T
        return 0.5 * (V_nc + V_nc.T)

    def rsup_check(self, V: np.ndarray, hbar: float, J: Optional[np.ndarray] = None) -> float:
        """Smallest eigenvalue of the Hermitian matrix V + (i hbar / 2) J"""
        J = J4 if J is None else J
        return float(np.linalg.eigvalsh(np.asarray(V) + 0.5j * hbar * J).min())

    def nc_rsup_check(self, cov: CovarianceMatrix, nc: NCParams) -> float:
        """Uncertainty relation for NC coordinates: V_nc + (i hbar_e / 2) Jtilde >= 0"""
        V_nc = self.nc_covariance(cov, nc)
        structure = self.bopp.symplectic_structure(nc)
        return self.rsup_check(V_nc, self.bopp.effective_planck(nc), structure.Jtilde)

    def wigner_density(self, wigner: WignerGaussian, X: np.ndarray) -> np.ndarray:
        """W at phase-space points X[..., 4] given in (x1, p1, x2, p2) ordering"""
        X = np.asarray(X, dtype=float)
        Y = X[..., [0, 2, 1, 3]]
        quad = np.einsum("...i,ij,...j->...", Y, wigner.LambdaM, Y)
        return np.exp(-quad) / (math.pi ** 2 * wigner.hbar ** 2)
