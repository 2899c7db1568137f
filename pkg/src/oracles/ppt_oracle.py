import logging
import math
from typing import Tuple

import numpy as np

from analyzers.covariance_builder import CovarianceMatrix
from phasespace.bopp_shift import J4

SEPARABLE = "separable"
ENTANGLED = "entangled"

MIRROR = np.diag([1.0, 1.0, 1.0, -1.0])
Z2 = np.diag([1.0, -1.0])


class PPTOracle:
    """Separability from the symplectic spectrum of the partially transposed covariance"""

    def __init__(self, tol: float = 1e-10):
        self.logger = logging.getLogger(__name__)
        self.tol = tol

    def symplectic_spectrum(self, V: np.ndarray) -> np.ndarray:
        """Symplectic eigenvalues |Im eig(J V)|, each listed once, ascending"""
        moduli = np.sort(np.abs(np.linalg.eigvals(J4 @ V).imag))
        return moduli[::2]

    def ppt_symplectic_check(self, cov: CovarianceMatrix) -> Tuple[float, str]:
        """
        Smallest symplectic eigenvalue after p2 -> -p2 and the verdict.

        Returns:
            (min symplectic eigenvalue, "separable" iff it is >= hbar/2 - tol)
        """
        reflected = MIRROR @ cov.V @ MIRROR
        nu_min = float(self.symplectic_spectrum(reflected)[0])
        verdict = SEPARABLE if nu_min >= cov.hbar / 2.0 - self.tol else ENTANGLED
        self.logger.debug(f"PPT minimum symplectic eigenvalue {nu_min:.12g} -> {verdict}")
        return nu_min, verdict

    def two_mode_squeezed(self, r: float, hbar: float = 1.0) -> CovarianceMatrix:
        """Covariance of the two-mode squeezed vacuum with squeezing r"""
        c, s = math.cosh(2 * r), math.sinh(2 * r)
        V = 0.5 * hbar * np.block([[c * np.eye(2), s * Z2], [s * Z2, c * np.eye(2)]])
        return CovarianceMatrix(V=V, hbar=hbar)
