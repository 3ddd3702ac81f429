"""Speed, braking, off-ramp and headway specifications and population statistics."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .exceptions import EmptyPopulationError, ParameterError
from .signals import DEFAULT_ALPHA, Trace, derive_motion_channels
from .stl import (
    FULL,
    Always,
    And,
    Eventually,
    Formula,
    Implies,
    Interval,
    Mask,
    Or,
    Until,
    Verdict,
    atom,
    channels,
    monitor,
)

SPEED = "speed"
ACCEL = "accel"
JERK = "jerk"
HEADWAY = "headway"

NO_LEADER_MASK = Mask(HEADWAY, "<", 0.0)


@dataclass(frozen=True)
class SpeedSpecParams:
    v_min: float = 22.5
    v_max: float = 31.0
    v_err: float = 1.0
    recovery_t: float = 5.0
    bounds: str = "both"  # "both" | "min" | "max"
    literal: bool = False

    def __post_init__(self):
        if not self.v_min < self.v_max:
            raise ParameterError(f"v_min ({self.v_min}) must be below v_max ({self.v_max})")
        if self.v_err < 0:
            raise ParameterError("v_err must be >= 0")
        if self.recovery_t <= 0:
            raise ParameterError("recovery_t must be > 0")
        if self.bounds not in ("both", "min", "max"):
            raise ParameterError(f"bounds must be 'both', 'min' or 'max', got {self.bounds!r}")


@dataclass(frozen=True)
class BrakingSpecParams:
    a_floor: float = -7.7
    j_floor: float = -9.9

    def __post_init__(self):
        if self.a_floor >= 0 or self.j_floor >= 0:
            raise ParameterError("a_floor and j_floor must both be negative")


@dataclass(frozen=True)
class OfframpSpecParams:
    v_sl: float = 18.0
    braking: BrakingSpecParams = field(default_factory=BrakingSpecParams)

    def __post_init__(self):
        if self.v_sl <= 0:
            raise ParameterError("v_sl must be positive")


@dataclass(frozen=True)
class HeadwaySpecParams:
    h_min: float = 4.0
    recovery_t: float = 2.0
    literal: bool = False

    def __post_init__(self):
        if self.h_min <= 0:
            raise ParameterError("h_min must be positive")
        if self.recovery_t <= 0:
            raise ParameterError("recovery_t must be positive")


def build_speed_spec(p: SpeedSpecParams = SpeedSpecParams()) -> Formula:
    """Speed stays in ``[v_min, v_max]``, or an excursion recovers within ``recovery_t``.

    Overspeed only counts once it exceeds ``v_max + v_err``. By default the two
    recovery clauses are conjoined; ``literal=True`` joins them with ``or``
    instead, which is vacuously true whenever either antecedent is false.
    ``bounds`` restricts the check to one side of the band.
    """
    window = Interval(0.0, p.recovery_t)
    above = Implies(
        atom(SPEED, ">", p.v_max + p.v_err),
        Eventually(atom(SPEED, "<=", p.v_max), window),
    )
    below = Implies(
        atom(SPEED, "<", p.v_min),
        Eventually(atom(SPEED, ">=", p.v_min), window),
    )
    if p.bounds == "min":
        return Always(Or(atom(SPEED, ">=", p.v_min), below))
    if p.bounds == "max":
        return Always(Or(atom(SPEED, "<=", p.v_max), above))
    band = And(atom(SPEED, ">=", p.v_min), atom(SPEED, "<=", p.v_max))
    recovery = Or(above, below) if p.literal else And(above, below)
    return Always(Or(band, recovery))


def _comfortable(b: BrakingSpecParams) -> Formula:
    return And(atom(ACCEL, ">", b.a_floor), atom(JERK, ">", b.j_floor))


def build_braking_spec(p: BrakingSpecParams = BrakingSpecParams()) -> Formula:
    return Always(_comfortable(p))


def build_offramp_spec(p: OfframpSpecParams = OfframpSpecParams()) -> Formula:
    """Above the ramp limit the vehicle keeps braking comfortably until it is below it."""
    slow = atom(SPEED, "<=", p.v_sl)
    return Always(
        Or(
            slow,
            Implies(atom(SPEED, ">", p.v_sl), Until(_comfortable(p.braking), slow, FULL)),
        )
    )


def build_headway_spec(p: HeadwaySpecParams = HeadwaySpecParams()) -> Formula:
    """Headway at least ``h_min``, tolerating dips that recover within ``recovery_t``.

    Samples with negative headway (no leader) are masked and count as
    satisfied. ``literal=True`` conjoins the two parts instead of or-ing them,
    which makes the recovery clause redundant.
    """
    ok = atom(HEADWAY, ">=", p.h_min, NO_LEADER_MASK)
    short = atom(HEADWAY, "<", p.h_min, NO_LEADER_MASK)
    recover = Implies(short, Eventually(ok, Interval(0.0, p.recovery_t)))
    body = And(ok, recover) if p.literal else Or(ok, recover)
    return Always(body)


SPEC_BUILDERS = {
    "speed": (SpeedSpecParams, build_speed_spec),
    "braking": (BrakingSpecParams, build_braking_spec),
    "offramp": (OfframpSpecParams, build_offramp_spec),
    "headway": (HeadwaySpecParams, build_headway_spec),
}

DEFAULT_STATISTIC = {"speed": SPEED, "braking": SPEED, "offramp": SPEED, "headway": HEADWAY}


def _coerce(value, like):
    if isinstance(value, str):
        if isinstance(like, bool):
            low = value.strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ParameterError(f"expected a boolean, got {value!r}")
        if isinstance(like, float):
            try:
                return float(value)
            except ValueError:
                raise ParameterError(f"expected a number, got {value!r}") from None
    return value


def make_params(name: str, overrides: Optional[dict] = None):
    """Parameter object for built-in spec ``name`` with string or typed overrides.

    For ``offramp`` the braking floors may be given as ``a_floor``/``j_floor``.
    """
    if name not in SPEC_BUILDERS:
        raise ParameterError(
            f"unknown spec {name!r}; available specs: {', '.join(sorted(SPEC_BUILDERS))}"
        )
    cls, _ = SPEC_BUILDERS[name]
    base = asdict(cls())
    overrides = dict(overrides or {})
    kwargs = {}
    if name == "offramp":
        braking = {
            k: _coerce(overrides.pop(k), 0.0) for k in ("a_floor", "j_floor") if k in overrides
        }
        kwargs["braking"] = BrakingSpecParams(**braking)
        base.pop("braking")
    for key, value in overrides.items():
        if key not in base:
            raise ParameterError(
                f"unknown parameter {key!r} for spec {name!r}; valid: {', '.join(sorted(base))}"
            )
        kwargs[key] = _coerce(value, base[key])
    return cls(**kwargs)


def build_spec(name: str, overrides: Optional[dict] = None) -> Formula:
    params = make_params(name, overrides)
    return SPEC_BUILDERS[name][1](params)


def prepare_trace(trace: Trace, formula: Formula, smooth=True, alpha=DEFAULT_ALPHA) -> Trace:
    """Derive acceleration/jerk from speed when ``formula`` needs them."""
    need = channels(formula)
    if (ACCEL in need and ACCEL not in trace) or (JERK in need and JERK not in trace):
        return derive_motion_channels(trace, smooth=smooth, alpha=alpha)
    return trace


def evaluate(formula: Formula, trace: Trace, smooth=True, alpha=DEFAULT_ALPHA) -> Verdict:
    return monitor(formula, prepare_trace(trace, formula, smooth, alpha))


def channel_mean(trace: Trace, channel: str) -> float:
    """Sample mean of ``channel``; headway ignores "no leader" samples (``nan`` if none remain)."""
    vals = trace[channel].values
    if channel == HEADWAY:
        vals = vals[vals >= 0]
    vals = vals[np.isfinite(vals)]
    return float(vals.mean()) if vals.size else math.nan


@dataclass(frozen=True)
class GroupStats:
    volume: int
    mean: Optional[float]
    std: Optional[float]


def _group(values: list[float], volume: int) -> GroupStats:
    vals = np.array([v for v in values if not math.isnan(v)], dtype=float)
    if vals.size == 0:
        return GroupStats(volume, None, None)
    return GroupStats(volume, float(vals.mean()), float(vals.std()))


@dataclass(frozen=True)
class ConformanceReport:
    """Conforming vs violating split of a trace population.

    ``mean``/``std`` are taken over per-trace means of ``statistic_channel``
    (population std); they are ``None`` for an empty group.
    """

    spec_name: str
    statistic_channel: str
    conforming: GroupStats
    violating: GroupStats

    @property
    def population(self) -> int:
        return self.conforming.volume + self.violating.volume

    def to_dict(self) -> dict:
        return asdict(self)

    def rows(self) -> list[tuple[str, str, str]]:
        label = self.statistic_channel.capitalize()
        unit = {SPEED: " (m/s)", HEADWAY: " (s)"}.get(self.statistic_channel, "")

        def fmt(x):
            return "" if x is None else f"{x:.2f}"

        c, v = self.conforming, self.violating
        return [
            ("Volume", str(c.volume), str(v.volume)),
            (f"Mean {label}{unit}", fmt(c.mean), fmt(v.mean)),
            (f"Std Dev ({label})", fmt(c.std), fmt(v.std)),
        ]


def n_workers() -> int:
    env = os.environ.get("TRAFFIC_STL_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ParameterError(f"TRAFFIC_STL_THREADS must be an integer, got {env!r}") from None
    return min(8, os.cpu_count() or 1)


def monitor_population(
    traces: Sequence[Trace], formula: Formula, smooth=True, alpha=DEFAULT_ALPHA, workers=None
) -> list[Verdict]:
    """Verdicts for every trace, in input order."""
    workers = workers or n_workers()
    if workers == 1 or len(traces) < 2:
        return [evaluate(formula, tr, smooth, alpha) for tr in traces]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda tr: evaluate(formula, tr, smooth, alpha), traces))


def summarize(
    traces: Sequence[Trace], verdicts: Sequence[Verdict], statistic_channel: str, spec_name: str
) -> ConformanceReport:
    if not traces:
        raise EmptyPopulationError("cannot build a conformance report for an empty population")
    good, bad = [], []
    for tr, verdict in zip(traces, verdicts, strict=True):
        (good if verdict.satisfied else bad).append(channel_mean(tr, statistic_channel))
    return ConformanceReport(
        spec_name, statistic_channel, _group(good, len(good)), _group(bad, len(bad))
    )


def evaluate_population(
    traces: Sequence[Trace],
    formula: Formula,
    statistic_channel: str = SPEED,
    spec_name: str = "custom",
    **kwargs,
) -> ConformanceReport:
    """Partition ``traces`` by summary satisfaction and aggregate ``statistic_channel``."""
    traces = list(traces)
    if not traces:
        raise EmptyPopulationError("cannot build a conformance report for an empty population")
    verdicts = monitor_population(traces, formula, **kwargs)
    return summarize(traces, verdicts, statistic_channel, spec_name)
