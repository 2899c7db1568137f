import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from phasespace.bopp_shift import J2
from solvers.ground_state import GaussianGroundState, GroundStateSolver
from utils.errors import InvalidParameters, SigmaCollapse, StepRejection

TimeFunction = Callable[[float], float]

# sigma below this fraction of sigma0 is treated as a collapse of the width.
SIGMA_FLOOR = 1e-8
MAX_DEPTH = 12


def _constant(value: float) -> TimeFunction:
    return lambda t: float(value)


@dataclass(frozen=True)
class IsotropicTDParams:
    """Time-dependent isotropic oscillator in commutative variables"""
    mu0: TimeFunction
    alpha: TimeFunction
    nu: TimeFunction
    kappa: float
    l: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.hbar <= 0:
            raise InvalidParameters(f"hbar must be positive, got {self.hbar}")
        if self.kappa <= 0:
            raise InvalidParameters(f"kappa must be positive, got {self.kappa}")
        if abs(self.l) >= self.kappa:
            raise InvalidParameters(f"|l|={abs(self.l)} must be below kappa={self.kappa}")

    @classmethod
    def constant(cls, mu0: float, alpha: float, nu: float, kappa: float,
                 l: float = 0.0, hbar: float = 1.0) -> "IsotropicTDParams":
        return cls(_constant(mu0), _constant(alpha), _constant(nu), kappa, l, hbar)

    @classmethod
    def from_samples(cls, t: np.ndarray, mu0: np.ndarray, alpha: np.ndarray, nu: np.ndarray,
                     kappa: float, l: float = 0.0, hbar: float = 1.0) -> "IsotropicTDParams":
        """Cubic-spline interpolation of uniformly sampled parameters"""
        t = np.asarray(t, dtype=float)
        if np.any(np.asarray(mu0) <= 0) or np.any(np.asarray(alpha) < 0):
            raise InvalidParameters("tabulated mu0 must be positive and alpha nonnegative")
        mu0_s, alpha_s, nu_s = (CubicSpline(t, np.asarray(col, dtype=float)) for col in (mu0, alpha, nu))
        return cls(
            mu0=lambda tt: float(mu0_s(tt)),
            alpha=lambda tt: float(alpha_s(tt)),
            nu=lambda tt: float(nu_s(tt)),
            kappa=kappa, l=l, hbar=hbar,
        )


@dataclass(frozen=True)
class EPNode:
    """Trajectory sample used to build the instantaneous ground state"""
    t: float
    sigma: float
    sigmadot: float
    mu0: float


@dataclass(frozen=True)
class EPTrajectory:
    """
    Width trajectory on a uniform time grid. b_int is the integrated b11,
    kept only to monitor the conservation of kappa.
    """
    t: np.ndarray
    sigma: np.ndarray
    sigmadot: np.ndarray
    mu0: np.ndarray
    b_int: np.ndarray
    kappa: float

    @property
    def a11(self) -> np.ndarray:
        return self.sigma ** 2

    @property
    def c11(self) -> np.ndarray:
        return -self.mu0 * self.sigma * self.sigmadot

    @property
    def b11(self) -> np.ndarray:
        return (self.c11 ** 2 + self.kappa ** 2) / self.a11

    @property
    def kappa_drift(self) -> np.ndarray:
        return np.abs(self.c11 ** 2 - self.a11 * self.b_int + self.kappa ** 2)

    def node(self, i: int) -> EPNode:
        return EPNode(float(self.t[i]), float(self.sigma[i]), float(self.sigmadot[i]), float(self.mu0[i]))

    def __len__(self) -> int:
        return len(self.t)


class TDIsotropicSolver:
    """
    Time-dependent isotropic oscillator through its quadratic invariant:
    Ermakov-Pinney width equation, invariant coefficients, spectrum and
    the instantaneous Gaussian ground state.
    """

    def __init__(self, step_tol: float = 1e-10, max_depth: int = MAX_DEPTH):
        self.logger = logging.getLogger(__name__)
        self.step_tol = step_tol
        self.max_depth = max_depth
        self.ground_states = GroundStateSolver()

    def _rhs(self, params: IsotropicTDParams, t: float, y: np.ndarray) -> np.ndarray:
        """Derivative of (sigma, pi = mu0 sigmadot, b_int)"""
        sigma, pi, _ = y
        mu0 = params.mu0(t)
        alpha = params.alpha(t)
        if mu0 <= 0:
            raise InvalidParameters(f"mu0({t}) = {mu0} must be positive")
        return np.array([
            pi / mu0,
            -alpha * sigma + params.kappa ** 2 / (mu0 * sigma ** 3),
            -2.0 * alpha * sigma * pi,
        ])

    def _rk4(self, params: IsotropicTDParams, t: float, y: np.ndarray, h: float) -> np.ndarray:
        k1 = self._rhs(params, t, y)
        k2 = self._rhs(params, t + h / 2, y + h / 2 * k1)
        k3 = self._rhs(params, t + h / 2, y + h / 2 * k2)
        k4 = self._rhs(params, t + h, y + h * k3)
        return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    def _advance(self, params: IsotropicTDParams, t: float, y: np.ndarray, h: float,
                 floor: float, depth: int = 0) -> np.ndarray:
        """One interval by step doubling, bisected until the estimate meets step_tol"""
        full = self._rk4(params, t, y, h)
        mid = self._rk4(params, t, y, h / 2)
        if mid[0] <= floor:
            raise SigmaCollapse(f"sigma reached {mid[0]:.3e} near t={t + h / 2:.6g}", last_good_time=t)
        half = self._rk4(params, t + h / 2, mid, h / 2)
        if not np.all(np.isfinite(half)) or half[0] <= floor:
            raise SigmaCollapse(f"sigma collapsed within [{t:.6g}, {t + h:.6g}]", last_good_time=t)

        error = float(np.max(np.abs(half - full) / np.maximum(1.0, np.abs(half)))) / 15.0
        if error <= self.step_tol:
            return half
        if depth >= self.max_depth:
            raise StepRejection(f"error {error:.3e} above {self.step_tol:.1e} at t={t:.6g} after {depth} bisections")
        y_mid = self._advance(params, t, y, h / 2, floor, depth + 1)
        return self._advance(params, t + h / 2, y_mid, h / 2, floor, depth + 1)

    def static_equilibrium_sigma(self, params: IsotropicTDParams, t: float = 0.0) -> float:
        """Fixed point sigma^4 = kappa^2 / (mu0 alpha) of the width equation"""
        mu0, alpha = params.mu0(t), params.alpha(t)
        if alpha <= 0:
            raise InvalidParameters("equilibrium width needs alpha > 0")
        return (params.kappa ** 2 / (mu0 * alpha)) ** 0.25

    def integrate_ep(self, params: IsotropicTDParams, sigma0: Optional[float], sigmadot0: float,
                     t_end: float, dt: float) -> EPTrajectory:
        """
        Integrate the Ermakov-Pinney equation with RK4 step doubling.

        Args:
            params: time-dependent parameters
            sigma0: initial width (None takes the static equilibrium)
            sigmadot0: initial width velocity
            t_end: end of the window
            dt: output spacing and largest internal step

        Returns:
            EPTrajectory on a uniform grid from 0 to t_end

        Raises:
            SigmaCollapse: when sigma approaches zero
            StepRejection: when error control cannot meet step_tol
        """
        if sigma0 is None:
            sigma0 = self.static_equilibrium_sigma(params)
        if sigma0 <= 0:
            raise InvalidParameters(f"sigma0 must be positive, got {sigma0}")
        if dt <= 0 or t_end <= 0:
            raise InvalidParameters("dt and t_end must be positive")

        steps = max(1, int(round(t_end / dt)))
        times = np.linspace(0.0, t_end, steps + 1)
        h = t_end / steps
        floor = SIGMA_FLOOR * sigma0

        mu0_0 = params.mu0(0.0)
        c0 = -mu0_0 * sigma0 * sigmadot0
        y = np.array([sigma0, mu0_0 * sigmadot0, (c0 ** 2 + params.kappa ** 2) / sigma0 ** 2])

        states = np.empty((steps + 1, 3))
        mu0 = np.empty(steps + 1)
        states[0], mu0[0] = y, mu0_0
        for i in range(steps):
            y = self._advance(params, times[i], y, h, floor)
            states[i + 1] = y
            mu0[i + 1] = params.mu0(times[i + 1])

        sigma = states[:, 0]
        traj = EPTrajectory(t=times, sigma=sigma, sigmadot=states[:, 1] / mu0, mu0=mu0,
                            b_int=states[:, 2], kappa=params.kappa)
        self.logger.info(f"Integrated {steps} steps to t={t_end:.6g}, max kappa drift {traj.kappa_drift.max():.3e}")
        return traj

    def trajectory_error(self, traj: EPTrajectory, reference: EPTrajectory) -> float:
        """Max |sigma - sigma_ref| on the nodes of traj; reference must refine its grid"""
        coarse, fine = len(traj) - 1, len(reference) - 1
        factor = fine // coarse
        if factor * coarse != fine or not np.allclose(reference.t[::factor], traj.t, rtol=0.0, atol=1e-9):
            raise InvalidParameters("reference grid does not refine the trajectory grid")
        return float(np.max(np.abs(traj.sigma - reference.sigma[::factor])))

    def convergence_ratio(self, params: IsotropicTDParams, sigma0: Optional[float], sigmadot0: float,
                          t_end: float, dt: float, refinement: int = 8) -> float:
        """
        Error ratio of the width trajectory under step halving.

        Both runs are compared with a reference at dt / refinement on the same
        grid. The kappa drift only measures the amplitude error, which RK4
        leaves at fifth order; the phase error carries the fourth-order rate.

        Returns:
            error(dt) / error(dt / 2), close to 16 for a fourth-order scheme
        """
        steps = max(1, int(round(t_end / dt)))
        t_end = steps * dt
        reference = self.integrate_ep(params, sigma0, sigmadot0, t_end, dt / refinement)
        coarse = self.integrate_ep(params, sigma0, sigmadot0, t_end, dt)
        fine = self.integrate_ep(params, sigma0, sigmadot0, t_end, dt / 2)
        errors = self.trajectory_error(coarse, reference), self.trajectory_error(fine, reference)
        self.logger.debug(f"Width errors {errors[0]:.3e}, {errors[1]:.3e} at dt={dt:.3g}, {dt / 2:.3g}")
        return errors[0] / errors[1]

    def invariant_coeffs(self, traj: EPTrajectory) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(a11, b11, c11) with b11 closed from c11^2 - a11 b11 = -kappa^2"""
        return traj.a11, traj.b11, traj.c11

    def consistency_residuals(self, traj: EPTrajectory, params: IsotropicTDParams) -> Tuple[float, float, float]:
        """
        Centered-difference residuals of the coefficient equations
        da/dt = -2c/mu0, dc/dt = alpha a - b/mu0, db/dt = 2 alpha c
        at the interior nodes.
        """
        a, b, c = self.invariant_coeffs(traj)
        t = traj.t
        h = t[1] - t[0]
        alpha = np.array([params.alpha(ti) for ti in t[1:-1]])
        mu0 = traj.mu0[1:-1]

        def centered(v: np.ndarray) -> np.ndarray:
            return (v[2:] - v[:-2]) / (2.0 * h)

        res_a = np.max(np.abs(centered(a) + 2.0 * c[1:-1] / mu0))
        res_c = np.max(np.abs(centered(c) - alpha * a[1:-1] + b[1:-1] / mu0))
        res_b = np.max(np.abs(centered(b) - 2.0 * alpha * c[1:-1]))
        return float(res_a), float(res_c), float(res_b)

    def td_ground_state(self, node: EPNode, params: IsotropicTDParams) -> GaussianGroundState:
        """Lambda11 = Lambda22 = (kappa - i mu0 sigma sigmadot) / (hbar sigma^2), Lambda12 = 0"""
        if node.sigma <= 0 or not math.isfinite(node.sigma):
            raise SigmaCollapse(f"sigma={node.sigma} at t={node.t}", last_good_time=node.t)
        diag = (params.kappa - 1j * node.mu0 * node.sigma * node.sigmadot) / (params.hbar * node.sigma ** 2)
        return self.ground_states.from_lambda(np.diag([diag, diag]), params.hbar)

    def invariant_spectrum(self, kappa: float, l: float) -> Tuple[float, float]:
        """(kappa - l, kappa + l)"""
        if kappa <= abs(l):
            raise InvalidParameters(f"kappa={kappa} must exceed |l|={abs(l)}")
        return kappa - l, kappa + l

    def invariant_matrix(self, a: float, b: float, c: float, l: float) -> np.ndarray:
        """Quadratic-form matrix [[M, -l J], [l J, M]] with M = [[b, c], [c, a]]"""
        M = np.array([[b, c], [c, a]])
        return np.block([[M, -l * J2], [l * J2, M]])

    def factorization_check(self, state: GaussianGroundState, half_width: float = 5.0,
                            points: int = 64) -> float:
        """Max |psi(x1, x2) - psi1(x1) psi2(x2)| over a square grid of +-half_width widths"""
        solver = self.ground_states
        widths = [1.0 / math.sqrt(state.Lambda_r[j, j]) for j in range(2)]
        x1 = np.linspace(-half_width * widths[0], half_width * widths[0], points)
        x2 = np.linspace(-half_width * widths[1], half_width * widths[1], points)
        X1, X2 = np.meshgrid(x1, x2, indexing="ij")

        joint = solver.evaluate_psi(state, X1, X2)
        single = [(state.Lambda_r[j, j] / math.pi) ** 0.25 for j in range(2)]
        psi1 = single[0] * np.exp(-0.5 * state.Lambda[0, 0] * X1 ** 2)
        psi2 = single[1] * np.exp(-0.5 * state.Lambda[1, 1] * X2 ** 2)
        deviation = float(np.max(np.abs(joint - psi1 * psi2)))
        self.logger.debug(f"Factorization deviation {deviation:.3e}")
        return deviation
