import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from solvers.mode_solver import ModeSpectrum
from utils.errors import InvalidParameters, NonConvergence


@dataclass(frozen=True)
class QuarticPoly:
    """c0 + c1 z + c2 z^2 + c3 z^3 + c4 z^4 with real coefficients"""
    c0: float
    c1: float
    c2: float
    c3: float
    c4: float

    def __post_init__(self):
        if self.c4 == 0:
            raise InvalidParameters("leading coefficient c4 must be nonzero")

    @property
    def coefficients(self) -> Tuple[float, float, float, float, float]:
        return self.c0, self.c1, self.c2, self.c3, self.c4

    def __call__(self, z: complex) -> complex:
        value = 0j
        for c in reversed(self.coefficients):
            value = value * z + c
        return value

    def scale(self, z: complex) -> float:
        """Sum |c_k| |z|^k, the size of the terms cancelling at a root"""
        return float(sum(abs(c) * abs(z) ** k for k, c in enumerate(self.coefficients)))


class QuarticOracle:
    """Durand-Kerner simultaneous iteration for quartic characteristic polynomials"""

    def __init__(self, max_iter: int = 500, tol: float = 1e-10):
        self.logger = logging.getLogger(__name__)
        self.max_iter = max_iter
        self.tol = tol

    def quartic_roots(self, p: QuarticPoly) -> List[complex]:
        """
        All four roots of p.

        Args:
            p: quartic polynomial

        Returns:
            Roots sorted by (real, imaginary) part

        Raises:
            NonConvergence: when the iteration stalls or a residual stays above tol
        """
        monic = [c / p.c4 for c in p.coefficients]

        def evaluate(z: complex) -> complex:
            value = 0j
            for c in reversed(monic):
                value = value * z + c
            return value

        radius = 1.0 + max(abs(c) for c in monic[:-1])
        seed = 0.4 + 0.9j
        roots = [radius * seed ** k / abs(seed) ** k for k in range(4)]

        for iteration in range(self.max_iter):
            largest = 0.0
            for i in range(4):
                denominator = 1.0 + 0j
                for j in range(4):
                    if j != i:
                        denominator *= roots[i] - roots[j]
                correction = evaluate(roots[i]) / denominator
                roots[i] -= correction
                largest = max(largest, abs(correction) / (1.0 + abs(roots[i])))
            if largest < 4.0 * np.finfo(float).eps:
                break
        # Rounding can keep the last corrections jittering at a few ulps.
        if largest > 1e-8:
            raise NonConvergence(f"Durand-Kerner did not settle in {self.max_iter} iterations")

        residuals = [abs(p(z)) / p.scale(z) for z in roots]
        if max(residuals) > self.tol:
            raise NonConvergence(f"root residuals {residuals} exceed {self.tol:.1e}")
        self.logger.debug(f"Quartic roots after {iteration + 1} iterations: {roots}")
        return sorted(roots, key=lambda z: (round(z.real, 12), z.imag))

    def characteristic_polynomial(self, M: np.ndarray) -> QuarticPoly:
        """det(z I - M) for a 4x4 matrix by the Faddeev-LeVerrier recursion"""
        M = np.asarray(M, dtype=float)
        coefficients = [1.0]
        B = np.eye(4)
        for k in range(1, 5):
            AB = M @ B
            c = -np.trace(AB) / k
            coefficients.append(c)
            B = AB + c * np.eye(4)
        c4, c3, c2, c1, c0 = coefficients
        return QuarticPoly(c0, c1, c2, c3, c4)

    def spectrum_polynomial(self, spectrum: ModeSpectrum) -> QuarticPoly:
        """P(l) = l^4 + Delta l^2 + Det(Omega), with roots +-i lambda_j"""
        return QuarticPoly(spectrum.DeltaOmega, 0.0, spectrum.Delta, 0.0, 1.0)

    def symplectic_frequencies(self, p: QuarticPoly) -> Tuple[float, float]:
        """Positive imaginary parts of the roots, ascending"""
        upper = sorted(z.imag for z in self.quartic_roots(p) if z.imag > 0)
        if len(upper) != 2:
            raise NonConvergence(f"expected two roots in the upper half plane, got {upper}")
        return upper[0], upper[1]
