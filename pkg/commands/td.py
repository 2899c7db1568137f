import logging
import math

from analyzers.covariance_builder import CovarianceBuilder
from analyzers.separability_analyzer import SeparabilityAnalyzer
from commands import EXIT_CONFIG, EXIT_INTEGRATION, EXIT_OK, emit
from exporters.csv_exporter import CsvExporter
from exporters.json_exporter import JsonExporter
from mappers.hamiltonian_mapper import HamiltonianMapper
from phasespace.bopp_shift import NCParams
from processors.table_processor import TableProcessor
from solvers.td_isotropic import IsotropicTDParams, TDIsotropicSolver
from utils.config import RunConfig
from utils.errors import ConfigError, InvalidParameters, SigmaCollapse, StepRejection

logger = logging.getLogger(__name__)

COLUMNS = ["t", "sigma", "sigmadot", "a11", "b11", "c11", "kappa_drift", "Lambda11_re", "Lambda11_im", "Ps"]


def build_params(cfg: RunConfig) -> IsotropicTDParams:
    """Time-dependent parameters for the configured drive model"""
    if cfg.drive == "table":
        if not cfg.table:
            raise ConfigError("drive=table needs a table path")
        processor = TableProcessor()
        frame = processor.read_table(cfg.table)
        if frame["t"].iloc[0] > 0 or frame["t"].iloc[-1] < cfg.t_end:
            raise ConfigError(f"table covers [{frame['t'].iloc[0]}, {frame['t'].iloc[-1]}], not [0, {cfg.t_end}]")
        return processor.to_params(frame, kappa=cfg.kappa, l=cfg.l, hbar=cfg.hbar)

    nc = NCParams(theta=cfg.theta, eta=cfg.eta, hbar=cfg.hbar)
    mu0, alpha0, nu = HamiltonianMapper().isotropic_commutative(cfg.m, cfg.k, nc)
    if cfg.drive == "constant":
        return IsotropicTDParams.constant(mu0, alpha0, nu, kappa=cfg.kappa, l=cfg.l, hbar=cfg.hbar)

    eps, freq = cfg.drive_epsilon, cfg.drive_frequency
    return IsotropicTDParams(
        mu0=lambda t: mu0,
        alpha=lambda t: alpha0 * (1.0 + eps * math.sin(freq * t)),
        nu=lambda t: nu,
        kappa=cfg.kappa, l=cfg.l, hbar=cfg.hbar,
    )


def run(cfg: RunConfig) -> int:
    """td: width trajectory and instantaneous ground-state separability"""
    solver = TDIsotropicSolver(step_tol=cfg.step_tol)
    try:
        params = build_params(cfg)
        lam_minus, lam_plus = solver.invariant_spectrum(params.kappa, params.l)
    except (ConfigError, InvalidParameters) as e:
        logger.error(f"Invalid td configuration: {e}")
        return EXIT_CONFIG
    logger.info(f"Invariant spectrum ({lam_minus:.6g}, {lam_plus:.6g})")

    try:
        traj = solver.integrate_ep(params, cfg.sigma0, cfg.sigmadot0, cfg.t_end, cfg.dt)
    except InvalidParameters as e:
        logger.error(f"Invalid td configuration: {e}")
        return EXIT_CONFIG
    except (SigmaCollapse, StepRejection) as e:
        last_good = getattr(e, "last_good_time", None)
        logger.error(f"Integration failed: {type(e).__name__}: {e} (last good t={last_good})")
        body = {"error": type(e).__name__, "message": str(e), "last_good_time": last_good}
        emit(JsonExporter().export(body, cfg.out), cfg.out)
        return EXIT_INTEGRATION

    builder = CovarianceBuilder()
    analyzer = SeparabilityAnalyzer()
    a11, b11, c11 = solver.invariant_coeffs(traj)
    drift = traj.kappa_drift
    rows = []
    for i in range(len(traj)):
        state = solver.td_ground_state(traj.node(i), params)
        cov = builder.covariance(state)
        rows.append({
            "t": traj.t[i], "sigma": traj.sigma[i], "sigmadot": traj.sigmadot[i],
            "a11": a11[i], "b11": b11[i], "c11": c11[i], "kappa_drift": drift[i],
            "Lambda11_re": state.Lambda11.real, "Lambda11_im": state.Lambda11.imag,
            "Ps": analyzer.simon_ps(cov),
        })

    if drift.max() > 1e-8:
        logger.warning(f"kappa drift {drift.max():.3e} exceeds 1e-8; consider a smaller dt")

    exporter = CsvExporter()
    emit(exporter.export(exporter.to_frame(rows, COLUMNS), cfg.out), cfg.out)
    return EXIT_OK
