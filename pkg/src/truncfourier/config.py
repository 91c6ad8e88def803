"""Run configuration for the command-line driver."""

import json
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from .halfline import (
    DEFAULT_ETA_MAX,
    DEFAULT_ETA_MIN,
    DEFAULT_M,
    DEFAULT_MU_MAX,
    DEFAULT_N,
    LogGrid,
    MuGrid,
)

__all__ = ["ConfigError", "ZGrid", "RunConfig", "DEFAULT_TOLERANCES", "load_config"]

DEFAULT_TOLERANCES = {
    "reflection": 1e-12,
    "entry_identity": 1e-12,
    "parseval": 1e-6,
    "roundtrip": 1e-8,
    "model_closed": 1e-10,
    "model_numeric": 1e-3,
    "spectrum_transverse": 1e-12,
    "spectrum_hausdorff": 2e-3,
    "spectral_radius": 0.02,
    "resolvent_slack": 1e-9,
    "normal_extrapolation": 0.02,
    "witness_slope": 0.05,
    "trace_det_slack": 1e-12,
}


class ConfigError(ValueError):
    """Raised for an invalid configuration; nothing has been computed yet."""


@dataclass(frozen=True)
class ZGrid:
    re_min: float = -1.2
    re_max: float = 1.2
    im_min: float = -1.2
    im_max: float = 1.2
    steps: int = 41

    def points(self):
        re = np.linspace(self.re_min, self.re_max, self.steps)
        im = np.linspace(self.im_min, self.im_max, self.steps)
        # row-major in Im z, then Re z: fixed order for reproducible output
        return [complex(a, b) for b in im for a in re]


@dataclass(frozen=True)
class RunConfig:
    eta_min: float = DEFAULT_ETA_MIN
    eta_max: float = DEFAULT_ETA_MAX
    n: int = DEFAULT_N
    mu_max: float = DEFAULT_MU_MAX
    m: int = DEFAULT_M
    amplitudes: tuple = (0.5, 1.0, 2.0)
    z_grid: ZGrid = field(default_factory=ZGrid)
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output_dir: str = "."
    deltas: tuple = (0.2, 0.1, 0.05, 0.02)

    def validate(self):
        """Raise ConfigError unless every parameter is usable."""
        try:
            LogGrid(self.eta_min, self.eta_max, self.n)
            MuGrid(self.mu_max, self.m)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        if not self.amplitudes or any(not (np.isfinite(a) and a > 0) for a in self.amplitudes):
            raise ConfigError(f"amplitudes must be positive, got {self.amplitudes}")
        zg = self.z_grid
        if not (zg.re_min < zg.re_max and zg.im_min < zg.im_max):
            raise ConfigError("z_grid needs re_min < re_max and im_min < im_max")
        if int(zg.steps) != zg.steps or zg.steps < 2:
            raise ConfigError(f"z_grid.steps must be an integer >= 2, got {zg.steps}")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ConfigError(f"unknown tolerance keys: {sorted(unknown)}")
        if any(not (np.isfinite(v) and v > 0) for v in self.tolerances.values()):
            raise ConfigError("tolerances must be positive")
        d = self.deltas
        if not d or any(not x > 0 for x in d) or any(b >= a for a, b in zip(d, d[1:])):
            raise ConfigError(f"deltas must be positive and strictly decreasing, got {d}")
        return self

    @property
    def log_grid(self) -> LogGrid:
        return LogGrid(self.eta_min, self.eta_max, self.n)

    @property
    def mu_grid(self) -> MuGrid:
        return MuGrid(self.mu_max, self.m)

    def tol(self, key) -> float:
        return float(self.tolerances[key])

    def with_overrides(self, **kwargs):
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kwargs).validate()

    def to_dict(self):
        d = asdict(self)
        d["amplitudes"] = list(self.amplitudes)
        d["deltas"] = list(self.deltas)
        return d


def load_config(path=None) -> RunConfig:
    """Read a JSON config; missing fields take their defaults."""
    if path is None:
        return RunConfig().validate()
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    kwargs = dict(raw)
    try:
        if "z_grid" in kwargs:
            zg = kwargs["z_grid"]
            if not isinstance(zg, dict) or set(zg) - {f.name for f in fields(ZGrid)}:
                raise ConfigError(f"bad z_grid: {zg}")
            kwargs["z_grid"] = ZGrid(**zg)
        if "tolerances" in kwargs:
            if not isinstance(kwargs["tolerances"], dict):
                raise ConfigError("tolerances must be an object")
            kwargs["tolerances"] = {**DEFAULT_TOLERANCES, **kwargs["tolerances"]}
        for key in ("amplitudes", "deltas"):
            if key in kwargs:
                kwargs[key] = tuple(float(v) for v in kwargs[key])
        cfg = RunConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    return cfg.validate()
