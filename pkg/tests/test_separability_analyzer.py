from dataclasses import replace

import numpy as np
import pytest

from analyzers.covariance_builder import CovarianceMatrix
from analyzers.separability_analyzer import ENTANGLED, SEPARABLE
from conftest import random_anisotropic_spec
from mappers.hamiltonian_mapper import NCOscillatorSpec
from oracles.ppt_oracle import PPTOracle
from phasespace.bopp_shift import NCParams
from utils.errors import DegenerateSpectrum, InvalidParameters


def local_symplectic(rng):
    a, b, c = rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)
    return np.array([[a, b], [c, (1.0 + b * c) / a]])


def test_vacuum_invariants(analyzer):
    vacuum = CovarianceMatrix(0.5 * np.eye(4), 1.0)
    np.testing.assert_allclose(analyzer.local_invariants(vacuum), (0.25, 0.25, 0.0, 0.0))
    assert analyzer.simon_ps(vacuum) == pytest.approx(0.0, abs=1e-15)


def test_decoupled_invariants(analyzer, commutative_spec):
    result = analyzer.run_pipeline(commutative_spec)
    d1, d2, d12, tau = analyzer.local_invariants(result.covariance)
    assert (d1, d2) == pytest.approx((0.25, 0.25))
    assert d12 == 0.0 and tau == 0.0
    assert result.report.verdict == SEPARABLE
    assert result.report.lambda12c == 0.0


def test_isotropic_is_separable(analyzer, iso_spec):
    report = analyzer.classify(iso_spec)
    assert report.Ps >= -1e-10
    assert report.is_separable


def test_isotropic_grid_is_separable(analyzer, rng):
    for m, k, theta, eta in rng.uniform(0.1, 0.8, size=(50, 4)):
        w = np.sqrt(k / m)
        report = analyzer.classify(NCOscillatorSpec(m, m, w, w, NCParams(theta, eta, 1.0)))
        assert report.verdict == SEPARABLE


def test_anisotropic_is_entangled(analyzer, aniso_spec):
    result = analyzer.run_pipeline(aniso_spec)
    assert result.report.Ps < 0
    assert result.report.verdict == ENTANGLED
    _, ppt_verdict = PPTOracle().ppt_symplectic_check(result.covariance)
    assert ppt_verdict == ENTANGLED


def test_pure_state_ps_equals_hbar2_delta12(analyzer, rng):
    for _ in range(20):
        report = analyzer.run_pipeline(random_anisotropic_spec(rng)).report
        assert report.Ps == pytest.approx(report.Delta12, rel=1e-8, abs=1e-14)


def test_verdict_agrees_with_ppt(analyzer, rng):
    ppt = PPTOracle()
    for _ in range(200):
        result = analyzer.run_pipeline(random_anisotropic_spec(rng))
        assert ppt.ppt_symplectic_check(result.covariance)[1] == result.report.verdict == ENTANGLED


def test_local_invariance(analyzer, rng):
    for _ in range(50):
        cov = analyzer.run_pipeline(random_anisotropic_spec(rng)).covariance
        S = np.zeros((4, 4))
        S[:2, :2], S[2:, 2:] = local_symplectic(rng), local_symplectic(rng)
        moved = CovarianceMatrix(S @ cov.V @ S.T, cov.hbar)
        np.testing.assert_allclose(analyzer.local_invariants(moved), analyzer.local_invariants(cov), atol=1e-10)


def test_mirror_reflection_negates_delta12(analyzer, aniso_spec):
    cov = analyzer.run_pipeline(aniso_spec).covariance
    d1, d2, d12, tau = analyzer.local_invariants(cov)
    r1, r2, r12, rtau = analyzer.local_invariants(analyzer.mirror_reflect(cov))
    assert (r1, r2) == pytest.approx((d1, d2), rel=1e-14)
    assert rtau == pytest.approx(tau, rel=1e-12, abs=1e-14)
    assert r12 == pytest.approx(-d12, rel=1e-14)


def test_rsup_invariant_form_vanishes_for_pure_states(analyzer, rng):
    for _ in range(20):
        cov = analyzer.run_pipeline(random_anisotropic_spec(rng)).covariance
        assert analyzer.rsup_invariant_form(cov) == pytest.approx(0.0, abs=1e-12)


def test_sep1_trivial_cases(analyzer, commutative_spec, iso_spec):
    assert analyzer.sep1_residual(commutative_spec) == 0.0
    assert analyzer.sep1_residual(iso_spec) == 0.0
    spec = NCOscillatorSpec(1.3, 0.7, 1.7, 1.7, NCParams(0.2, 0.3, 1.0))
    assert analyzer.sep1_residual(spec) == pytest.approx(0.0, abs=1e-12)


def test_separable_frequency_root(analyzer):
    template = NCOscillatorSpec(1.0, 1.0, 2.0, 1.0, NCParams(0.1, 0.1, 1.0))
    w2 = analyzer.find_separable_frequency(template, 0.3, 0.8)
    # m1 m2 = hbar = 1 and theta = eta put the root at 1 / w1
    assert w2 == pytest.approx(0.5, abs=1e-10)

    result = analyzer.run_pipeline(replace(template, w2t=w2))
    assert abs(result.state.Lambda12c) < 1e-8
    assert result.report.Ps >= -1e-8
    h = result.hamiltonian
    assert h.mu1 * h.nu1 * h.omega1 == pytest.approx(0.0625, rel=1e-9)
    assert h.mu2 * h.nu2 * h.omega2 == pytest.approx(0.0625, rel=1e-9)


def test_separable_frequency_needs_sign_change(analyzer):
    template = NCOscillatorSpec(1.0, 1.0, 2.0, 1.0, NCParams(0.1, 0.1, 1.0))
    with pytest.raises(InvalidParameters):
        analyzer.find_separable_frequency(template, 3.0, 4.0)


def test_classify_degenerate(analyzer):
    spec = NCOscillatorSpec(1.0, 1.0, 1.0, 1.0, NCParams(0.0, 0.0, 1.0))
    with pytest.raises(DegenerateSpectrum):
        analyzer.classify(spec)
