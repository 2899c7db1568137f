import logging
from pathlib import Path

import numpy as np
import pandas as pd

from solvers.td_isotropic import IsotropicTDParams
from utils.errors import ConfigError

COLUMNS = ["t", "mu0", "alpha", "nu"]
COLUMN_ALIASES = {"μ0": "mu0", "mu_0": "mu0", "α": "alpha", "ν": "nu", "time": "t"}


class TableProcessor:
    """Read tabulated time-dependent parameters (rows "t mu0 alpha nu")"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def read_table(self, file_path: str) -> pd.DataFrame:
        """
        Load a whitespace-delimited parameter table with a header line.

        Args:
            file_path: path to the table

        Returns:
            DataFrame with columns t, mu0, alpha, nu sorted by t

        Raises:
            ConfigError: when the file is missing, malformed or not uniformly spaced
        """
        path = Path(file_path)
        if not path.exists():
            raise ConfigError(f"Parameter table not found: {file_path}")

        frame = None
        for encoding in ("utf-8", "latin-1"):
            try:
                frame = pd.read_csv(path, sep=r"\s+", comment="#", encoding=encoding)
                break
            except UnicodeDecodeError:
                continue
            except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
                raise ConfigError(f"Cannot parse {file_path}: {e}") from e
        if frame is None:
            raise ConfigError(f"Cannot decode {file_path}")

        frame = frame.rename(columns=lambda c: COLUMN_ALIASES.get(c.strip(), c.strip().lower()))
        missing = [c for c in COLUMNS if c not in frame.columns]
        if missing:
            raise ConfigError(f"{file_path}: missing columns {missing}")

        try:
            frame = frame[COLUMNS].astype(float)
        except ValueError as e:
            raise ConfigError(f"{file_path}: non-numeric entries: {e}") from e
        self.check_uniform(frame["t"].to_numpy(), file_path)
        self.logger.info(f"Read {len(frame)} parameter rows from {file_path}")
        return frame.reset_index(drop=True)

    def check_uniform(self, t: np.ndarray, source: str = "table") -> float:
        """Return the time step, raising ConfigError unless spacing is uniform and increasing"""
        if len(t) < 4:
            raise ConfigError(f"{source}: at least four rows are needed for cubic interpolation")
        steps = np.diff(t)
        step = float(steps.mean())
        if step <= 0 or np.max(np.abs(steps - step)) > 1e-9 * max(1.0, abs(step)):
            raise ConfigError(f"{source}: time column must be uniformly spaced and increasing")
        return step

    def to_params(self, frame: pd.DataFrame, kappa: float, l: float = 0.0,
                  hbar: float = 1.0) -> IsotropicTDParams:
        """Interpolating parameter set built from a loaded table"""
        return IsotropicTDParams.from_samples(
            frame["t"].to_numpy(), frame["mu0"].to_numpy(), frame["alpha"].to_numpy(),
            frame["nu"].to_numpy(), kappa=kappa, l=l, hbar=hbar,
        )
