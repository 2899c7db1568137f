import logging
from dataclasses import dataclass

import numpy as np

from utils.errors import InvalidParameters

# Single-mode symplectic unit; every 4x4 object uses (x1, p1, x2, p2) ordering.
J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
J4 = np.block([[J2, np.zeros((2, 2))], [np.zeros((2, 2)), J2]])


@dataclass(frozen=True)
class NCParams:
    """Noncommutativity scales theta (position), eta (momentum) and hbar"""
    theta: float = 0.0
    eta: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.hbar <= 0:
            raise InvalidParameters(f"hbar must be positive, got {self.hbar}")
        if self.theta < 0 or self.eta < 0:
            raise InvalidParameters("theta and eta must be nonnegative")
        if self.theta >= self.hbar or self.eta >= self.hbar:
            raise InvalidParameters(
                f"theta={self.theta}, eta={self.eta} outside the regime theta, eta < hbar={self.hbar}"
            )

    @property
    def is_commutative(self) -> bool:
        return self.theta == 0.0 and self.eta == 0.0


@dataclass(frozen=True)
class SymplecticStructure:
    """Canonical J and the deformed NC structure Jtilde"""
    J: np.ndarray
    Jtilde: np.ndarray


@dataclass(frozen=True)
class DarbouxMap:
    """Bopp-shift matrix taking commutative to NC coordinates"""
    Upsilon: np.ndarray

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.Upsilon))

    def apply(self, X: np.ndarray) -> np.ndarray:
        return self.Upsilon @ X


class BoppShift:
    """
    Phase-space conventions of the noncommutative plane.
    Builds the Darboux (Bopp) map, the deformed symplectic matrix and
    the effective Planck constant.
    """

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def effective_planck(self, nc: NCParams) -> float:
        """hbar_e = hbar (1 + theta eta / 4 hbar^2)"""
        return nc.hbar * (1.0 + nc.theta * nc.eta / (4.0 * nc.hbar ** 2))

    def symplectic_structure(self, nc: NCParams) -> SymplecticStructure:
        """
        Build J and the deformed matrix Jtilde.

        Args:
            nc: noncommutativity parameters

        Returns:
            SymplecticStructure with off-diagonal blocks +-Pi/hbar_e
        """
        pi_block = np.diag([nc.theta, nc.eta]) / self.effective_planck(nc)
        jtilde = np.block([[J2, pi_block], [-pi_block, J2]])
        return SymplecticStructure(J=J4.copy(), Jtilde=jtilde)

    def darboux_map(self, nc: NCParams) -> DarbouxMap:
        """
        Bopp shift in (x1, p1, x2, p2) ordering:
        x1~ = x1 - (theta/2hbar) p2, p1~ = p1 + (eta/2hbar) x2,
        x2~ = x2 + (theta/2hbar) p1, p2~ = p2 - (eta/2hbar) x1.
        """
        shift = np.diag([nc.theta, nc.eta]) @ J2 / (2.0 * nc.hbar)
        upsilon = np.block([[np.eye(2), -shift], [shift, np.eye(2)]])
        return DarbouxMap(Upsilon=upsilon)

    def verify_symplectic_relation(self, nc: NCParams) -> float:
        """
        Max-entry residual of hbar_e Jtilde = hbar Upsilon J Upsilon^T.

        Args:
            nc: noncommutativity parameters

        Returns:
            Residual; zero up to rounding for every valid nc
        """
        structure = self.symplectic_structure(nc)
        upsilon = self.darboux_map(nc).Upsilon
        lhs = self.effective_planck(nc) * structure.Jtilde
        rhs = nc.hbar * upsilon @ structure.J @ upsilon.T
        residual = float(np.max(np.abs(lhs - rhs)))
        self.logger.debug(f"Symplectic relation residual {residual:.3e} at {nc}")
        return residual
