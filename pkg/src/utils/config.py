# ncphase - Noncommutative Oscillator Entanglement Toolkit

import json
import os
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Dict, Any, List, Optional
import logging

from utils.errors import ConfigError

THREADS_ENV = "NCPHASE_THREADS"

FLOAT_KEYS = {
    "m1", "m2", "omega1t", "omega2t", "theta", "eta", "hbar", "m", "k",
    "kappa", "l", "sigma0", "sigmadot0", "t_end", "dt", "step_tol",
    "drive_epsilon", "drive_frequency",
}
INT_KEYS = {"threads", "seed"}
SWEEP_KEYS = {"m1", "m2", "omega1t", "omega2t", "theta", "eta", "hbar"}
STR_KEYS = {"table", "out", "drive"}


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter with an inclusive linear range"""
    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.name not in SWEEP_KEYS:
            raise ConfigError(f"Cannot sweep unknown parameter: {self.name}")
        if self.start > self.stop:
            raise ConfigError(f"Sweep range for {self.name} has start > stop")
        if self.count < 2:
            raise ConfigError(f"Sweep range for {self.name} needs count >= 2")

    @classmethod
    def parse(cls, name: str, spec: str) -> "SweepAxis":
        """Parse a START:STOP:COUNT range string"""
        parts = spec.split(":")
        if len(parts) != 3:
            raise ConfigError(f"Range must be START:STOP:COUNT, got {spec!r}")
        try:
            return cls(name, float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError as e:
            raise ConfigError(f"Bad range {spec!r}: {e}") from e

    def values(self) -> List[float]:
        step = (self.stop - self.start) / (self.count - 1)
        return [self.start + i * step for i in range(self.count)]


@dataclass(frozen=True)
class RunConfig:
    """Validated snapshot of every setting a command needs"""
    m1: float
    m2: float
    omega1t: float
    omega2t: float
    theta: float
    eta: float
    hbar: float
    m: float
    k: float
    kappa: float
    l: float
    sigma0: Optional[float]
    sigmadot0: float
    t_end: float
    dt: float
    step_tol: float
    drive: str
    drive_epsilon: float
    drive_frequency: float
    table: Optional[str]
    threads: int
    seed: int
    out: Optional[str]
    axes: List[SweepAxis] = field(default_factory=list)

    def __post_init__(self):
        if self.hbar <= 0:
            raise ConfigError("hbar must be positive")
        if min(self.m1, self.m2, self.m) <= 0:
            raise ConfigError("masses must be positive")
        if self.theta < 0 or self.eta < 0:
            raise ConfigError("theta and eta must be nonnegative")
        if self.dt <= 0 or self.t_end <= 0:
            raise ConfigError("dt and t_end must be positive")
        if self.sigma0 is not None and self.sigma0 <= 0:
            raise ConfigError("sigma0 must be positive")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")
        if len(self.axes) > 2:
            raise ConfigError("at most two sweep axes are supported")
        if self.drive not in ("constant", "sinusoidal", "table"):
            raise ConfigError(f"Unknown drive model: {self.drive}")

    def with_values(self, **overrides: float) -> "RunConfig":
        """Copy with some physical parameters replaced (used per sweep point)"""
        values = asdict(self)
        values["axes"] = list(self.axes)
        values.update(overrides)
        return RunConfig(**values)


class Config:
    """
    Configuration management for ncphase runs.
    Reads flat key=value files, applies environment defaults and CLI overrides.
    """

    def __init__(self, config_file: Optional[str] = None):
        """Initialize configuration with defaults and an optional settings file"""
        self.logger = logging.getLogger(__name__)
        self.config_file = Path(config_file) if config_file else None

        self.default_settings = {
            "m1": 1.0,
            "m2": 1.0,
            "omega1t": 1.0,
            "omega2t": 2.0,
            "theta": 0.1,
            "eta": 0.1,
            "hbar": 1.0,
            "m": 1.0,
            "k": 1.0,
            "kappa": None,
            "l": 0.0,
            "sigma0": None,
            "sigmadot0": 0.0,
            "t_end": 62.83185307179586,
            "dt": 1e-3,
            "step_tol": 1e-10,
            "drive": "constant",
            "drive_epsilon": 0.1,
            "drive_frequency": 1.3,
            "table": None,
            "threads": None,
            "seed": 20240519,
            "out": None,
        }

        self.settings = self.load_settings()

    def load_settings(self) -> Dict[str, Any]:
        """Load settings from the configuration file merged over defaults"""
        settings = self.default_settings.copy()
        if self.config_file is None:
            return settings

        if not self.config_file.exists():
            raise ConfigError(f"Config file not found: {self.config_file}")

        with open(self.config_file, "r", encoding="utf-8") as f:
            for line_no, line in enumerate(f, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{self.config_file}:{line_no}: expected key=value")
                key, raw = (part.strip() for part in line.split("=", 1))
                settings[key] = self._coerce(key, raw)

        self.logger.info(f"Loaded settings from {self.config_file}")
        return settings

    def _coerce(self, key: str, raw: Any) -> Any:
        """Convert a raw value to the type its key expects"""
        if raw is None:
            return None
        try:
            if key in FLOAT_KEYS:
                return float(raw)
            if key in INT_KEYS:
                return int(raw)
            if key in STR_KEYS:
                return str(raw)
        except ValueError as e:
            raise ConfigError(f"Invalid value for {key}: {raw!r}") from e
        raise ConfigError(f"Unknown config key: {key}")

    def update_settings(self, new_settings: Dict[str, Any]):
        """Apply overrides; None values leave the current setting untouched"""
        for key, value in new_settings.items():
            if value is not None:
                self.settings[key] = self._coerce(key, value)

    def get_threads(self) -> int:
        """Thread count: explicit setting, else NCPHASE_THREADS, else 1"""
        threads = self.settings.get("threads")
        if threads is not None:
            return int(threads)
        env_threads = os.getenv(THREADS_ENV)
        if env_threads:
            try:
                return int(env_threads)
            except ValueError as e:
                raise ConfigError(f"{THREADS_ENV} must be an integer") from e
        return 1

    def get_kappa(self) -> float:
        """Constant of motion; defaults to hbar so the static width matches"""
        kappa = self.settings.get("kappa")
        return float(kappa) if kappa is not None else float(self.settings["hbar"])

    def export_settings(self) -> str:
        """Export settings as JSON string"""
        return json.dumps(self.settings, indent=2, sort_keys=True)

    def to_run_config(self, axes: Optional[List[SweepAxis]] = None) -> RunConfig:
        """Validate the merged settings and freeze them into a RunConfig"""
        s = self.settings
        return RunConfig(
            m1=s["m1"], m2=s["m2"], omega1t=s["omega1t"], omega2t=s["omega2t"],
            theta=s["theta"], eta=s["eta"], hbar=s["hbar"], m=s["m"], k=s["k"],
            kappa=self.get_kappa(), l=s["l"], sigma0=s["sigma0"],
            sigmadot0=s["sigmadot0"], t_end=s["t_end"], dt=s["dt"],
            step_tol=s["step_tol"], drive=s["drive"],
            drive_epsilon=s["drive_epsilon"], drive_frequency=s["drive_frequency"],
            table=s["table"], threads=self.get_threads(), seed=int(s["seed"]),
            out=s["out"], axes=list(axes or []),
        )
