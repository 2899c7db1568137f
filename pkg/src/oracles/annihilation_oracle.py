import logging
import math
from typing import Optional

import numpy as np

from solvers.ground_state import GaussianGroundState, GroundStateSolver
from solvers.mode_solver import ModeBasis


class AnnihilationOracle:
    """
    Finite-difference check that a ground state is annihilated by both
    lowering operators, (U_x x - i hbar U_p d/dx) psi = 0.
    """

    def __init__(self, points: int = 128, half_width: float = 5.0, step_fraction: float = 1e-4):
        self.logger = logging.getLogger(__name__)
        self.points = points
        self.half_width = half_width
        self.step_fraction = step_fraction
        self.solver = GroundStateSolver()

    def grid_annihilation_residual(self, state: GaussianGroundState, basis: ModeBasis,
                                   h: Optional[float] = None) -> float:
        """
        Max-norm of both annihilation residuals on a uniform grid.

        The grid spans +-half_width standard deviations of |psi|^2 per axis;
        derivatives use centered differences with step h.

        Args:
            state: candidate ground state
            basis: mode basis providing U_x and U_p
            h: difference step (default step_fraction times the smallest deviation)

        Returns:
            max |residual| relative to max |U_x x psi|
        """
        stds = np.sqrt(0.5 * np.diag(np.linalg.inv(state.Lambda_r)))
        if h is None:
            h = self.step_fraction * float(stds.min())

        x1 = np.linspace(-self.half_width * stds[0], self.half_width * stds[0], self.points)
        x2 = np.linspace(-self.half_width * stds[1], self.half_width * stds[1], self.points)
        X1, X2 = np.meshgrid(x1, x2, indexing="ij")

        psi = self.solver.evaluate_psi(state, X1, X2)
        d1 = (self.solver.evaluate_psi(state, X1 + h, X2) - self.solver.evaluate_psi(state, X1 - h, X2)) / (2 * h)
        d2 = (self.solver.evaluate_psi(state, X1, X2 + h) - self.solver.evaluate_psi(state, X1, X2 - h)) / (2 * h)

        Ux, Up = basis.Ux, basis.Up
        worst, reference = 0.0, 0.0
        for j in range(2):
            position = (Ux[j, 0] * X1 + Ux[j, 1] * X2) * psi
            momentum = -1j * state.hbar * (Up[j, 0] * d1 + Up[j, 1] * d2)
            worst = max(worst, float(np.max(np.abs(position + momentum))))
            reference = max(reference, float(np.max(np.abs(position))))

        residual = worst / reference if reference > 0 else worst
        if not math.isfinite(residual):
            self.logger.error("Annihilation residual is not finite")
        self.logger.debug(f"Annihilation residual {residual:.3e} (h={h:.3e}, {self.points}^2 points)")
        return residual
