import math
from typing import Union

import numpy as np

from utils.errors import InvalidParameters


def pinney_sigma(mu0: float, alpha: float, kappa: float, sigma0: float, sigmadot0: float,
                 t: Union[float, np.ndarray]) -> np.ndarray:
    """
    Width for constant mu0, alpha built from the linear solutions cos(wt), sin(wt)/w:
    sigma^2 = sigma0^2 u^2 + 2 sigma0 sigmadot0 u v + (sigmadot0^2 + kappa^2/(mu0 sigma0)^2) v^2.
    """
    if mu0 <= 0 or alpha <= 0 or sigma0 <= 0:
        raise InvalidParameters("Pinney superposition needs mu0, alpha, sigma0 > 0")
    omega = math.sqrt(alpha / mu0)
    t = np.asarray(t, dtype=float)
    u = np.cos(omega * t)
    v = np.sin(omega * t) / omega
    squared = (sigma0 ** 2 * u ** 2 + 2.0 * sigma0 * sigmadot0 * u * v
               + (sigmadot0 ** 2 + kappa ** 2 / (mu0 * sigma0) ** 2) * v ** 2)
    return np.sqrt(squared)
