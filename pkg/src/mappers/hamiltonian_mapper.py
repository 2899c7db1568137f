import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from phasespace.bopp_shift import BoppShift, NCParams
from utils.errors import InvalidParameters

# Permutation matrix taking (x1, x2, p1, p2) to (x1, p1, x2, p2).
XP_TO_MODE = np.array([
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
])


@dataclass(frozen=True)
class NCOscillatorSpec:
    """Anisotropic oscillator in NC space: masses, NC frequencies and NC scales"""
    m1: float
    m2: float
    w1t: float
    w2t: float
    nc: NCParams

    def __post_init__(self):
        if self.m1 <= 0 or self.m2 <= 0:
            raise InvalidParameters(f"masses must be positive, got m1={self.m1}, m2={self.m2}")
        if self.w1t < 0 or self.w2t < 0:
            raise InvalidParameters("NC frequencies must be nonnegative")
        if self.w1t == 0 and self.w2t == 0:
            raise InvalidParameters("at least one NC frequency must be nonzero")

    @property
    def is_isotropic(self) -> bool:
        return self.m1 == self.m2 and self.w1t == self.w2t


@dataclass(frozen=True)
class CommHamiltonian:
    """Commutative-space quadratic Hamiltonian parameters"""
    mu1: float
    mu2: float
    alpha1: float
    alpha2: float
    nu1: float
    nu2: float
    hbar: float = 1.0

    def __post_init__(self):
        if self.mu1 <= 0 or self.mu2 <= 0:
            raise InvalidParameters("effective masses must be positive")
        if self.alpha1 < 0 or self.alpha2 < 0:
            raise InvalidParameters("stiffnesses must be nonnegative")

    @property
    def omega1(self) -> float:
        return math.sqrt(self.alpha1 / self.mu1)

    @property
    def omega2(self) -> float:
        return math.sqrt(self.alpha2 / self.mu2)

    @property
    def is_decoupled(self) -> bool:
        return self.nu1 == 0.0 and self.nu2 == 0.0


class HamiltonianMapper:
    """
    Maps NC-space oscillators onto equivalent commutative Hamiltonians
    through the Bopp shift.
    """

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self.bopp = BoppShift()

    def to_commutative(self, spec: NCOscillatorSpec) -> CommHamiltonian:
        """
        Effective masses, stiffnesses and couplings of the anisotropic oscillator.

        Args:
            spec: NC-space oscillator

        Returns:
            CommHamiltonian at the same instant
        """
        m1, m2, w1, w2 = spec.m1, spec.m2, spec.w1t, spec.w2t
        theta, eta, hbar = spec.nc.theta, spec.nc.eta, spec.nc.hbar

        inv_mu1 = 1.0 / m1 + m2 * w2 ** 2 * theta ** 2 / (4.0 * hbar ** 2)
        inv_mu2 = 1.0 / m2 + m1 * w1 ** 2 * theta ** 2 / (4.0 * hbar ** 2)
        h = CommHamiltonian(
            mu1=1.0 / inv_mu1,
            mu2=1.0 / inv_mu2,
            alpha1=m1 * w1 ** 2 + eta ** 2 / (4.0 * hbar ** 2 * m2),
            alpha2=m2 * w2 ** 2 + eta ** 2 / (4.0 * hbar ** 2 * m1),
            nu1=(eta + m1 * m2 * w2 ** 2 * theta) / (4.0 * m1 * hbar),
            nu2=(eta + m1 * m2 * w1 ** 2 * theta) / (4.0 * m2 * hbar),
            hbar=hbar,
        )
        self.logger.debug(f"Mapped {spec} -> {h}")
        return h

    def isotropic_commutative(self, m: float, k: float, nc: NCParams) -> Tuple[float, float, float]:
        """
        Isotropic oscillator with mass m and stiffness k.

        Returns:
            (mu0, alpha, nu)
        """
        if m <= 0:
            raise InvalidParameters(f"mass must be positive, got {m}")
        if k < 0:
            raise InvalidParameters(f"stiffness must be nonnegative, got {k}")
        hbar = nc.hbar
        mu0 = 1.0 / (1.0 / m + k * nc.theta ** 2 / (4.0 * hbar ** 2))
        alpha = k + nc.eta ** 2 / (4.0 * m * hbar ** 2)
        nu = nc.eta / (4.0 * m * hbar) + k * nc.theta / (4.0 * hbar)
        return mu0, alpha, nu

    def operator_form_matrix(self, h: CommHamiltonian) -> np.ndarray:
        """
        4x4 matrix of H = p'mu p/2 + x'Kx/2 + x'L1 p + p'L1' x, assembled in
        (x1, x2, p1, p2) blocks and permuted to (x1, p1, x2, p2).
        """
        mu = np.diag([1.0 / h.mu1, 1.0 / h.mu2])
        K = np.diag([h.alpha1, h.alpha2])
        L1 = np.array([[0.0, -h.nu2], [h.nu1, 0.0]])
        blocks = np.block([[K, 2.0 * L1], [2.0 * L1.T, mu]])
        return XP_TO_MODE @ blocks @ XP_TO_MODE.T

    def nc_quadratic_form(self, spec: NCOscillatorSpec) -> np.ndarray:
        """Matrix of H_nc = X~' H X~ / 2 in NC coordinates"""
        return np.diag([
            spec.m1 * spec.w1t ** 2, 1.0 / spec.m1,
            spec.m2 * spec.w2t ** 2, 1.0 / spec.m2,
        ])

    def pullback_quadratic_form(self, spec: NCOscillatorSpec) -> np.ndarray:
        """Commutative quadratic form obtained as Upsilon' H_nc Upsilon"""
        upsilon = self.bopp.darboux_map(spec.nc).Upsilon
        return upsilon.T @ self.nc_quadratic_form(spec) @ upsilon
