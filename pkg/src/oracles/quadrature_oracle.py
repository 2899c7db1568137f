import logging
import math
from typing import Tuple

import numpy as np
from numpy.polynomial.hermite import hermgauss

from analyzers.covariance_builder import WignerGaussian, reorder_to_mode_major
from solvers.ground_state import GaussianGroundState, GroundStateSolver
from utils.errors import InvalidParameters


class QuadratureOracle:
    """
    Gauss-Hermite moments of Gaussian Wigner functions and wavefunctions,
    taken on the principal axes of the quadratic form.
    """

    def __init__(self, order: int = 32):
        self.logger = logging.getLogger(__name__)
        self.order = order
        self.nodes, self.weights = hermgauss(order)

    def _principal_axes(self, M: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        D, R = np.linalg.eigh(M)
        if np.any(D <= 0):
            raise InvalidParameters(f"quadratic form is not positive definite (eigenvalues {D})")
        return D, R

    def _tensor_grid(self, dim: int) -> Tuple[np.ndarray, np.ndarray]:
        """Nodes (N, dim) and product weights (N,) of the tensorized rule"""
        grids = np.meshgrid(*([self.nodes] * dim), indexing="ij")
        weight_grids = np.meshgrid(*([self.weights] * dim), indexing="ij")
        points = np.stack([g.ravel() for g in grids], axis=1)
        weights = np.prod(np.stack([w.ravel() for w in weight_grids], axis=1), axis=1)
        return points, weights

    def _phase_space_samples(self, wigner: WignerGaussian) -> Tuple[np.ndarray, np.ndarray]:
        """Points Y = R t / sqrt(D) in (x1, x2, p1, p2) and weights including W's prefactor"""
        D, R = self._principal_axes(wigner.LambdaM)
        t, w = self._tensor_grid(4)
        Y = (t / np.sqrt(D)) @ R.T
        prefactor = 1.0 / (math.pi ** 2 * wigner.hbar ** 2 * math.sqrt(np.prod(D)))
        return Y, w * prefactor

    def gauss_hermite_normalization(self, wigner: WignerGaussian) -> float:
        """Integral of W over phase space"""
        _, w = self._phase_space_samples(wigner)
        return float(w.sum())

    def gauss_hermite_first_moments(self, wigner: WignerGaussian) -> np.ndarray:
        """<X_a>_W in (x1, p1, x2, p2) ordering"""
        Y, w = self._phase_space_samples(wigner)
        return (w @ Y)[[0, 2, 1, 3]]

    def moment_matrix(self, wigner: WignerGaussian) -> np.ndarray:
        """All second moments <X_a X_b>_W, returned in (x1, p1, x2, p2) ordering"""
        Y, w = self._phase_space_samples(wigner)
        moments = (Y * w[:, None]).T @ Y
        return reorder_to_mode_major(0.5 * (moments + moments.T))

    def gauss_hermite_moments(self, wigner: WignerGaussian, alpha: int, beta: int) -> float:
        """
        Second moment <X_alpha X_beta>_W.

        Args:
            wigner: Gaussian Wigner function
            alpha: index in (x1, p1, x2, p2) ordering
            beta: index in (x1, p1, x2, p2) ordering

        Returns:
            Quadrature value of the moment
        """
        return float(self.moment_matrix(wigner)[alpha, beta])

    def psi_normalization(self, state: GaussianGroundState, solver: GroundStateSolver) -> float:
        """Integral of |psi|^2 over the plane, sampling psi itself at the nodes"""
        D, R = self._principal_axes(state.Lambda_r)
        t, w = self._tensor_grid(2)
        x = (t / np.sqrt(D)) @ R.T
        density = np.abs(solver.evaluate_psi(state, x[:, 0], x[:, 1])) ** 2
        # |psi|^2 = N^2 exp(-|t|^2) on these nodes; undo the Hermite weight.
        integrand = density * np.exp(np.sum(t ** 2, axis=1))
        return float(w @ integrand / math.sqrt(np.prod(D)))
