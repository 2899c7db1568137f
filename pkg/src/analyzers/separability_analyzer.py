import logging
from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np
from scipy.optimize import brentq

from analyzers.covariance_builder import CovarianceBuilder, CovarianceMatrix
from mappers.hamiltonian_mapper import CommHamiltonian, HamiltonianMapper, NCOscillatorSpec
from phasespace.bopp_shift import J2
from solvers.ground_state import GaussianGroundState, GroundStateSolver
from solvers.mode_solver import ModeBasis, ModeSolver, ModeSpectrum
from utils.errors import InvalidParameters

SEPARABLE = "separable"
ENTANGLED = "entangled"

MIRROR = np.diag([1.0, 1.0, 1.0, -1.0])


@dataclass(frozen=True)
class SeparabilityReport:
    """Local invariants, Simon functional and the resulting verdict"""
    Delta1: float
    Delta2: float
    Delta12: float
    tau_v: float
    Ps: float
    lambda12c: float
    verdict: str
    tolerance: float

    @property
    def is_separable(self) -> bool:
        return self.verdict == SEPARABLE


@dataclass(frozen=True)
class PipelineResult:
    """Every intermediate of one analysis point"""
    spec: NCOscillatorSpec
    hamiltonian: CommHamiltonian
    spectrum: ModeSpectrum
    basis: ModeBasis
    state: GaussianGroundState
    covariance: CovarianceMatrix
    report: SeparabilityReport


class SeparabilityAnalyzer:
    """
    Separability of two-mode Gaussian states through Simon's criterion,
    plus the closed-form separable surface of the anisotropic NC oscillator.
    """

    def __init__(self, mutate: bool = False):
        self.logger = logging.getLogger(__name__)
        self.mapper = HamiltonianMapper()
        self.modes = ModeSolver()
        self.ground_states = GroundStateSolver()
        self.covariances = CovarianceBuilder()
        self.mutate = mutate

    def local_invariants(self, cov: CovarianceMatrix) -> Tuple[float, float, float, float]:
        """(Det V11, Det V22, Det V12, Tr(V11 J V12 J V22 J V12' J))"""
        V11, V12, V22 = cov.V11, cov.V12, cov.V22
        tau_v = np.trace(V11 @ J2 @ V12 @ J2 @ V22 @ J2 @ V12.T @ J2)
        return (float(np.linalg.det(V11)), float(np.linalg.det(V22)),
                float(np.linalg.det(V12)), float(tau_v))

    def tolerance(self, delta1: float, delta2: float) -> float:
        return 1e-10 * max(1.0, delta1 * delta2)

    def simon_ps(self, cov: CovarianceMatrix) -> float:
        """Ps = D1 D2 + (hbar^2/4 - |D12|)^2 - tau_v - hbar^2 (D1 + D2) / 4"""
        d1, d2, d12, tau_v = self.local_invariants(cov)
        q = cov.hbar ** 2 / 4.0
        return d1 * d2 + (q - abs(d12)) ** 2 - tau_v - q * (d1 + d2)

    def rsup_invariant_form(self, cov: CovarianceMatrix) -> float:
        """Invariant form of the uncertainty relation; zero for pure states"""
        d1, d2, d12, tau_v = self.local_invariants(cov)
        q = cov.hbar ** 2 / 4.0
        return d1 * d2 + (q - d12) ** 2 - tau_v - q * (d1 + d2)

    def mirror_reflect(self, cov: CovarianceMatrix) -> CovarianceMatrix:
        """Partial transpose as the reflection p2 -> -p2"""
        return CovarianceMatrix(V=MIRROR @ cov.V @ MIRROR, hbar=cov.hbar)

    def report(self, cov: CovarianceMatrix, lambda12c: float = 0.0) -> SeparabilityReport:
        """Invariants, Ps and verdict of a covariance matrix"""
        d1, d2, d12, tau_v = self.local_invariants(cov)
        ps = self.simon_ps(cov)
        tol = self.tolerance(d1, d2)
        verdict = SEPARABLE if ps >= -tol else ENTANGLED
        return SeparabilityReport(d1, d2, d12, tau_v, ps, lambda12c, verdict, tol)

    def sep1_residual(self, spec: NCOscillatorSpec) -> float:
        """
        LHS - RHS of the separable-surface relation
        (4h^2/m + w1^2 th^2)(et/m + w2^2 th)^2(et^2/m + 4h^2 w1^2)
          = (4h^2/m + w2^2 th^2)(et/m + w1^2 th)^2(et^2/m + 4h^2 w2^2)
        with m = m1 m2.
        """
        m12 = spec.m1 * spec.m2
        hbar, theta, eta = spec.nc.hbar, spec.nc.theta, spec.nc.eta
        w1s, w2s = spec.w1t ** 2, spec.w2t ** 2

        def side(wa: float, wb: float) -> float:
            return ((4.0 * hbar ** 2 / m12 + wa * theta ** 2)
                    * (eta / m12 + wb * theta) ** 2
                    * (eta ** 2 / m12 + 4.0 * hbar ** 2 * wa))

        return side(w1s, w2s) - side(w2s, w1s)

    def find_separable_frequency(self, spec: NCOscillatorSpec, lower: float, upper: float,
                                 xtol: float = 1e-14) -> float:
        """
        Root in w2t of sep1_residual with the other parameters of spec fixed.

        Args:
            spec: template point; its w2t is ignored
            lower: bracket start; the isotropic point w2t = w1t is always a root, so
                bracket it out to find the other one
            upper: bracket end

        Returns:
            w2t on the separable surface

        Raises:
            InvalidParameters: when the residual does not change sign on the bracket
        """
        def residual(w2: float) -> float:
            return self.sep1_residual(replace(spec, w2t=w2))

        f_lo, f_hi = residual(lower), residual(upper)
        if f_lo * f_hi > 0:
            raise InvalidParameters(f"sep1 residual has no sign change on [{lower}, {upper}]")
        root = brentq(residual, lower, upper, xtol=xtol, rtol=4 * np.finfo(float).eps)
        self.logger.info(f"Separable frequency w2t={root:.15g} for w1t={spec.w1t}")
        return float(root)

    def run_pipeline(self, spec: NCOscillatorSpec) -> PipelineResult:
        """Map, diagonalize, build the ground state and its covariance, then classify"""
        h = self.mapper.to_commutative(spec)
        spectrum, basis = self.modes.solve(h)
        state = self.ground_states.ground_state(basis, spec.nc.hbar)
        cov = self.covariances.covariance(state, mutate=self.mutate)
        report = self.report(cov, lambda12c=state.Lambda12c)
        return PipelineResult(spec, h, spectrum, basis, state, cov, report)

    def classify(self, spec: NCOscillatorSpec) -> SeparabilityReport:
        """
        Full pipeline verdict for one oscillator.

        Raises:
            DegenerateSpectrum: when the two symplectic frequencies coincide
            NotNormalizable: when the ground state cannot be normalized
        """
        report = self.run_pipeline(spec).report
        self.logger.info(f"{spec}: Ps={report.Ps:.6g}, Lambda12c={report.lambda12c:.6g} -> {report.verdict}")
        return report
