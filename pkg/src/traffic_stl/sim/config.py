"""Scenario configuration and its flat ``key = value`` file format.

Blank lines and ``#`` comments are ignored. Keys are exactly the field names
of :class:`ScenarioConfig`; unknown keys are an error.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from ..exceptions import ConfigError, ParameterError
from .idm import IdmParams


@dataclass(frozen=True)
class ScenarioConfig:
    duration: float = 100.0
    dt: float = 0.05
    n_vehicles: int = 110
    # spawn model: exponential entry headways, floored by the insertion gap of
    # the car-following model in force
    mean_entry_headway: float = 2.0
    v0_mean: float = 25.0
    v0_spread: float = 1.5
    vehicle_length: float = 5.0
    corridor_length: float = 30000.0
    offramp_distance: float = 800.0  # ramp position ahead of the initial column head
    offramp_length: float = 2000.0
    offramp_taper: float = 300.0
    offramp_speed_limit: float = 18.0
    offramp_target_margin: float = 1.0  # drivers aim this far below the ramp limit
    offramp_fraction: float = 0.1
    comm_enabled: bool = True
    comm_range: float = 500.0
    beacon_period: float = 0.05
    tx_power_mw: float = 15.0
    min_power_dbm: float = -90.0
    headway_threshold: float = 4.0
    baseline_time_gap: float = 1.0
    ivc_time_gap: float = 4.0
    a_max: float = 1.4
    b_comf: float = 2.0
    s0: float = 2.0
    delta: float = 4.0
    rng_seed: int = 0

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ParameterError("dt must be positive")
        if not self.duration > 0:
            raise ParameterError("duration must be positive")
        if not self.comm_range > 0:
            raise ParameterError("comm_range must be positive")
        if self.n_vehicles < 0:
            raise ParameterError("n_vehicles must be >= 0")
        if not self.beacon_period > 0:
            raise ParameterError("beacon_period must be positive")
        if not 0 <= self.offramp_fraction <= 1:
            raise ParameterError("offramp_fraction must be within [0, 1]")
        if not self.mean_entry_headway > 0:
            raise ParameterError("mean_entry_headway must be positive")
        if self.v0_spread < 0 or self.v0_mean - self.v0_spread <= 0:
            raise ParameterError("desired speeds must stay positive")

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))

    def idm(self, T_gap: float) -> IdmParams:
        return IdmParams(self.a_max, self.b_comf, T_gap, self.s0, self.v0_mean, self.delta)

    @property
    def baseline_idm(self) -> IdmParams:
        return self.idm(self.baseline_time_gap)

    @property
    def ivc_idm(self) -> IdmParams:
        return self.idm(self.ivc_time_gap)

    def to_text(self) -> str:
        return "".join(f"{k} = {_fmt(v)}\n" for k, v in asdict(self).items())


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(v)


def _convert(key, raw: str, kind):
    raw = raw.strip()
    if kind is bool:
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"expected true/false, got {raw!r}")
    if kind is int:
        return int(raw)
    return float(raw)


_TYPES = {f.name: {"float": float, "int": int, "bool": bool}[f.type] for f in fields(ScenarioConfig)}


def parse_config(text: str, path=None) -> ScenarioConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"expected 'key = value', got {line.strip()!r}", lineno, path)
        key, raw = (part.strip() for part in body.split("=", 1))
        if key not in _TYPES:
            raise ConfigError(f"unknown key {key!r}", lineno, path)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno, path)
        try:
            values[key] = _convert(key, raw, _TYPES[key])
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}", lineno, path) from None
    try:
        return ScenarioConfig(**values)
    except ParameterError as exc:
        raise ConfigError(str(exc), path=path) from None


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", path=path) from None
    return parse_config(text, path)
