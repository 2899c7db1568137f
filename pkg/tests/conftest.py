import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT))

from analyzers.separability_analyzer import SeparabilityAnalyzer  # noqa: E402
from mappers.hamiltonian_mapper import HamiltonianMapper, NCOscillatorSpec  # noqa: E402
from phasespace.bopp_shift import NCParams  # noqa: E402

SEED = 20240519


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def nc():
    return NCParams(theta=0.1, eta=0.1, hbar=1.0)


@pytest.fixture
def aniso_spec(nc):
    """Anisotropic NC oscillator m1 = m2 = 1, frequencies (1, 2)"""
    return NCOscillatorSpec(m1=1.0, m2=1.0, w1t=1.0, w2t=2.0, nc=nc)


@pytest.fixture
def iso_spec(nc):
    return NCOscillatorSpec(m1=1.0, m2=1.0, w1t=1.0, w2t=1.0, nc=nc)


@pytest.fixture
def commutative_spec():
    return NCOscillatorSpec(m1=1.0, m2=1.0, w1t=1.0, w2t=2.0, nc=NCParams(0.0, 0.0, 1.0))


@pytest.fixture
def mapper():
    return HamiltonianMapper()


@pytest.fixture
def analyzer():
    return SeparabilityAnalyzer()


def random_anisotropic_spec(rng: np.random.Generator, hbar: float = 1.0) -> NCOscillatorSpec:
    """Random valid anisotropic NC oscillator with well separated frequencies"""
    m1, m2 = rng.uniform(0.5, 2.0, size=2)
    w1 = rng.uniform(0.5, 2.0)
    w2 = w1 + rng.uniform(0.3, 1.0)
    theta, eta = rng.uniform(0.02, 0.5, size=2) * hbar
    return NCOscillatorSpec(m1=m1, m2=m2, w1t=w1, w2t=w2, nc=NCParams(theta, eta, hbar))
