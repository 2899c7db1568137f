import logging
from typing import Any, Dict

from analyzers.covariance_builder import CovarianceBuilder
from analyzers.separability_analyzer import SeparabilityAnalyzer
from commands import EXIT_ANALYSIS, EXIT_CONFIG, EXIT_OK, emit
from exporters.json_exporter import JsonExporter
from mappers.hamiltonian_mapper import NCOscillatorSpec
from oracles.ppt_oracle import PPTOracle
from phasespace.bopp_shift import BoppShift, NCParams
from utils.config import RunConfig
from utils.errors import (
    DegenerateSpectrum, InvalidParameters, NormalizationFailure, NotNormalizable, SingularUp,
)

logger = logging.getLogger(__name__)

ANALYSIS_ERRORS = (DegenerateSpectrum, NotNormalizable, SingularUp, NormalizationFailure)


def spec_from_config(cfg: RunConfig) -> NCOscillatorSpec:
    """Oscillator described by a run configuration"""
    nc = NCParams(theta=cfg.theta, eta=cfg.eta, hbar=cfg.hbar)
    return NCOscillatorSpec(m1=cfg.m1, m2=cfg.m2, w1t=cfg.omega1t, w2t=cfg.omega2t, nc=nc)


def analyze_point(spec: NCOscillatorSpec, analyzer: SeparabilityAnalyzer, seed: int) -> Dict[str, Any]:
    """Full report for one oscillator; raises the analysis errors unchanged"""
    result = analyzer.run_pipeline(spec)
    state, cov, report = result.state, result.covariance, result.report
    builder = CovarianceBuilder()
    ppt_min, ppt_verdict = PPTOracle().ppt_symplectic_check(cov)
    if ppt_verdict != report.verdict:
        logger.warning(f"PPT oracle verdict {ppt_verdict} differs from Ps verdict {report.verdict}")

    return {
        "lambda1": result.spectrum.lambda1,
        "lambda2": result.spectrum.lambda2,
        "Lambda": {
            "Lambda11": state.Lambda11.real,
            "Lambda22": state.Lambda22.real,
            "Lambda12c": state.Lambda12c,
        },
        "V": cov.V.ravel().tolist(),
        "Delta1": report.Delta1,
        "Delta2": report.Delta2,
        "Delta12": report.Delta12,
        "tau_v": report.tau_v,
        "Ps": report.Ps,
        "verdict": report.verdict,
        "rsup_min": builder.rsup_check(cov.V, cov.hbar),
        "sep1_residual": analyzer.sep1_residual(spec),
        "hbar_e": BoppShift().effective_planck(spec.nc),
        "omega1": result.hamiltonian.omega1,
        "omega2": result.hamiltonian.omega2,
        "Ps_ppt_min": ppt_min,
        "seed": seed,
    }


def run(cfg: RunConfig) -> int:
    """analyze: JSON report for the configured oscillator"""
    exporter = JsonExporter()
    try:
        spec = spec_from_config(cfg)
    except InvalidParameters as e:
        logger.error(f"Invalid parameters: {e}")
        return EXIT_CONFIG

    try:
        body = analyze_point(spec, SeparabilityAnalyzer(), cfg.seed)
        code = EXIT_OK
    except InvalidParameters as e:
        logger.error(f"Invalid parameters: {e}")
        return EXIT_CONFIG
    except ANALYSIS_ERRORS as e:
        logger.error(f"Analysis failed: {type(e).__name__}: {e}")
        body = {"error": type(e).__name__, "message": str(e)}
        code = EXIT_ANALYSIS

    emit(exporter.export(body, cfg.out), cfg.out)
    return code
