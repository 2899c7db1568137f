import logging

import numpy as np

from analyzers.covariance_builder import CovarianceMatrix, WignerGaussian, reorder_to_mode_major
from utils.errors import SingularBlock

COND_LIMIT = 1e12


class InverseOracle:
    """Covariance obtained by inverting the Wigner quadratic form block by block"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def _checked_inverse(self, block: np.ndarray, name: str) -> np.ndarray:
        if not np.all(np.isfinite(block)) or np.linalg.cond(block) > COND_LIMIT:
            raise SingularBlock(f"block {name} is singular or ill-conditioned")
        return np.linalg.inv(block)

    def block_inverse(self, wigner: WignerGaussian) -> np.ndarray:
        """LambdaM^-1 through the Schur complement of the position block"""
        A, B, D = wigner.Lambda1, wigner.Lambda12, wigner.Lambda2
        A_inv = self._checked_inverse(A, "Lambda1")
        S_inv = self._checked_inverse(D - B.T @ A_inv @ B, "Schur complement")
        upper_right = -A_inv @ B @ S_inv
        upper_left = A_inv + A_inv @ B @ S_inv @ B.T @ A_inv
        return np.block([[upper_left, upper_right], [upper_right.T, S_inv]])

    def pure_state_inverse(self, wigner: WignerGaussian) -> np.ndarray:
        """Simplified inverse hbar^2 [[Lambda2, -Lambda12'], [-Lambda12, Lambda1]] valid for pure states"""
        h2 = wigner.hbar ** 2
        return h2 * np.block([[wigner.Lambda2, -wigner.Lambda12.T], [-wigner.Lambda12, wigner.Lambda1]])

    def covariance_via_inverse(self, wigner: WignerGaussian) -> CovarianceMatrix:
        """
        V = LambdaM^-1 / 2, reordered to (x1, p1, x2, p2).

        Raises:
            SingularBlock: when a block of the partition cannot be inverted
        """
        inverse = self.block_inverse(wigner)
        simplified = self.pure_state_inverse(wigner)
        gap = float(np.max(np.abs(inverse - simplified)))
        self.logger.debug(f"Block inverse vs simplified form: max gap {gap:.3e}")
        V = reorder_to_mode_major(0.5 * inverse)
        return CovarianceMatrix(V=0.5 * (V + V.T), hbar=wigner.hbar)
