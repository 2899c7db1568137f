# ncphase - Noncommutative Oscillator Entanglement Toolkit

class NCPhaseError(Exception):
    """Base class for all toolkit errors"""


class InvalidParameters(NCPhaseError, ValueError):
    """Physical parameters violate a type invariant"""


class ConfigError(NCPhaseError, ValueError):
    """Run configuration could not be parsed or validated"""


class DegenerateSpectrum(NCPhaseError):
    """Symplectic spectrum has coinciding frequencies (D ~ 0)"""


class NormalizationFailure(NCPhaseError):
    """Mode eigenvector has nonpositive symplectic norm"""


class DecoupledFallback(NCPhaseError):
    """Closed-form mode vectors vanish because both couplings are zero"""


class SingularUp(NCPhaseError):
    """Momentum block U_p of the annihilation conditions is singular"""


class NotNormalizable(NCPhaseError):
    """Real part of the Gaussian exponent is not positive definite"""


class SingularBlock(NCPhaseError):
    """A block of the Wigner exponent could not be inverted"""


class NonConvergence(NCPhaseError):
    """Iterative root finder exhausted its iteration budget"""


class StepRejection(NCPhaseError):
    """Step-doubling error control could not meet the tolerance"""


class SigmaCollapse(NCPhaseError):
    """Ermakov-Pinney width reached zero"""

    def __init__(self, message: str, last_good_time: float = 0.0):
        super().__init__(message)
        self.last_good_time = last_good_time
