"""Sampled real-valued signals and per-vehicle traces.

A :class:`Signal` is an immutable pair of strictly increasing sample times and
values with an interpolation mode. A :class:`Trace` groups the signals of one
vehicle. Negative headway samples mean "no leader" and are kept as-is here;
masking happens at the formula level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterator, Mapping, NamedTuple

import numpy as np

from .exceptions import (
    DomainError,
    InsufficientDataError,
    MissingChannelError,
    ParameterError,
)

LINEAR = "linear"
CONSTANT = "constant"
INTERPOLATIONS = (LINEAR, CONSTANT)

NO_LEADER = -1.0
DEFAULT_ALPHA = 0.3

# channels that hold a measured ratio and may jump; everything else defaults to linear
_CONSTANT_CHANNELS = frozenset({"headway", "h", "on_offramp"})


def default_interpolation(channel: str) -> str:
    return CONSTANT if channel in _CONSTANT_CHANNELS else LINEAR


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


class Sample(NamedTuple):
    t: float
    value: float


@dataclass(frozen=True, eq=False)
class Signal:
    """Time-stamped samples of one real-valued quantity.

    Parameters
    ----------
    times : array-like of float
        Strictly increasing, finite sample times in seconds.
    values : array-like of float
        Sample values. ``inf`` is allowed (it is used for masked robustness);
        ``nan`` is not.
    interpolation : {"linear", "constant"}
        How values between samples are defined. ``constant`` holds the left
        sample.
    unit : str
        Free-form label, carried along but never interpreted.
    """

    times: np.ndarray
    values: np.ndarray
    interpolation: str = LINEAR
    unit: str = ""

    def __post_init__(self):
        times = _frozen(self.times)
        values = _frozen(self.values)
        if times.ndim != 1 or values.shape != times.shape:
            raise ParameterError("times and values must be 1-D arrays of equal length")
        if times.size == 0:
            raise InsufficientDataError("a signal needs at least one sample")
        if not np.all(np.isfinite(times)):
            raise ParameterError("sample times must be finite")
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise ParameterError("sample times must be strictly increasing")
        if np.any(np.isnan(values)):
            raise ParameterError("sample values must not be NaN")
        if self.interpolation not in INTERPOLATIONS:
            raise ParameterError(
                f"interpolation must be one of {INTERPOLATIONS}, got {self.interpolation!r}"
            )
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_samples(cls, samples, interpolation=LINEAR, unit=""):
        pairs = list(samples)
        if not pairs:
            raise InsufficientDataError("a signal needs at least one sample")
        t, v = zip(*pairs)
        return cls(t, v, interpolation, unit)

    def __len__(self):
        return self.times.size

    def __iter__(self) -> Iterator[Sample]:
        for t, v in zip(self.times.tolist(), self.values.tolist()):
            yield Sample(t, v)

    def __eq__(self, other):
        if not isinstance(other, Signal):
            return NotImplemented
        return (
            self.interpolation == other.interpolation
            and self.unit == other.unit
            and np.array_equal(self.times, other.times)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    @property
    def samples(self) -> list[Sample]:
        return list(self)

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.times[0]), float(self.times[-1])

    def value_at(self, t: float) -> float:
        return value_at(self, t)

    def values_at(self, ts) -> np.ndarray:
        """Vectorised :func:`value_at`; every element of ``ts`` must lie in the domain."""
        ts = np.asarray(ts, dtype=float)
        lo, hi = self.domain
        if ts.size and (ts.min() < lo or ts.max() > hi):
            bad = ts[(ts < lo) | (ts > hi)][0]
            raise DomainError(float(bad), self.domain)
        if self.interpolation == CONSTANT or len(self) == 1:
            idx = np.searchsorted(self.times, ts, side="right") - 1
            return self.values[np.clip(idx, 0, len(self) - 1)]
        if np.all(np.isfinite(self.values)):
            return np.interp(ts, self.times, self.values)
        return np.array([value_at(self, float(t)) for t in ts])

    def with_values(self, values) -> "Signal":
        return Signal(self.times, values, self.interpolation, self.unit)


def value_at(signal: Signal, t: float) -> float:
    """Value of ``signal`` at time ``t``.

    Exact at sample points; between samples the signal's interpolation mode
    applies. Raises :class:`DomainError` outside ``[first, last]`` sample time.
    """
    times = signal.times
    lo, hi = float(times[0]), float(times[-1])
    if not (lo <= t <= hi):
        raise DomainError(t, (lo, hi))
    i = int(np.searchsorted(times, t, side="right")) - 1
    if times[i] == t or signal.interpolation == CONSTANT or i == len(times) - 1:
        return float(signal.values[i])
    t0, t1 = times[i], times[i + 1]
    v0, v1 = signal.values[i], signal.values[i + 1]
    if v0 == v1:
        return float(v0)
    w = (t - t0) / (t1 - t0)
    return float(v0 + w * (v1 - v0))


def derivative(signal: Signal) -> Signal:
    """Finite-difference derivative on the input grid.

    Interior samples use the central stencil over ``i-1`` and ``i+1``;
    endpoints use one-sided differences. Output is piecewise-linear.
    """
    n = len(signal)
    if n < 2:
        raise InsufficientDataError(f"derivative needs at least 2 samples, got {n}")
    t, x = signal.times, signal.values
    d = np.empty(n)
    d[0] = (x[1] - x[0]) / (t[1] - t[0])
    d[-1] = (x[-1] - x[-2]) / (t[-1] - t[-2])
    if n > 2:
        d[1:-1] = (x[2:] - x[:-2]) / (t[2:] - t[:-2])
    unit = f"{signal.unit}/s" if signal.unit else ""
    return Signal(t, d, LINEAR, unit)


def exp_smooth(signal: Signal, alpha: float = DEFAULT_ALPHA) -> Signal:
    """Single exponential smoothing ``y[i] = alpha*x[i] + (1-alpha)*y[i-1]``."""
    if not (0.0 < alpha <= 1.0):
        raise ParameterError(f"alpha must be in (0, 1], got {alpha!r}")
    x = signal.values
    if alpha == 1.0:
        return signal
    y = np.empty_like(x)
    acc = y[0] = x[0]
    keep = 1.0 - alpha
    for i in range(1, x.size):
        acc = alpha * x[i] + keep * acc
        y[i] = acc
    return signal.with_values(y)


@dataclass(frozen=True, eq=False)
class Trace:
    """All channels recorded for one vehicle.

    ``labels`` carries non-numeric per-sample columns (``leader_id``) so that a
    trace can be written back to CSV without loss. Labels are aligned with
    :attr:`grid`.
    """

    vehicle_id: str
    channels: Mapping[str, Signal]
    labels: Mapping[str, tuple] = field(default_factory=dict)
    grid: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not self.channels:
            raise InsufficientDataError(f"trace {self.vehicle_id!r} has no channels")
        chans = MappingProxyType(dict(self.channels))
        domains = {name: sig.domain for name, sig in chans.items()}
        first = next(iter(domains.values()))
        for name, dom in domains.items():
            if dom != first:
                raise ParameterError(
                    f"channel {name!r} spans {dom}, expected {first} like the other channels"
                )
        grid = _frozen(np.unique(np.concatenate([s.times for s in chans.values()])))
        object.__setattr__(self, "channels", chans)
        object.__setattr__(self, "labels", MappingProxyType(dict(self.labels)))
        object.__setattr__(self, "grid", grid)

    @classmethod
    def from_arrays(cls, vehicle_id, t, interpolation=None, labels=None, **channels):
        """Build a trace whose channels all share the sample times ``t``."""
        interpolation = interpolation or {}
        sigs = {
            name: Signal(t, vals, interpolation.get(name, default_interpolation(name)))
            for name, vals in channels.items()
        }
        return cls(str(vehicle_id), sigs, labels or {})

    @property
    def time_domain(self) -> tuple[float, float]:
        return float(self.grid[0]), float(self.grid[-1])

    @property
    def duration(self) -> float:
        return float(self.grid[-1] - self.grid[0])

    def __contains__(self, name):
        return name in self.channels

    def __getitem__(self, name) -> Signal:
        try:
            return self.channels[name]
        except KeyError:
            raise MissingChannelError(name, self.channels) from None

    def with_channels(self, **signals: Signal) -> "Trace":
        chans = dict(self.channels)
        chans.update(signals)
        return Trace(self.vehicle_id, chans, self.labels)


def derive_motion_channels(
    trace: Trace,
    smooth: bool = True,
    alpha: float = DEFAULT_ALPHA,
    order: str = "smooth-first",
    speed: str = "speed",
) -> Trace:
    """Add ``accel`` and ``jerk`` channels when they are absent.

    ``order="smooth-first"`` smooths acceleration before differentiating it
    again and then smooths jerk; ``order="smooth-last"`` differentiates the raw
    signals and smooths both afterwards. Existing channels are left untouched.
    """
    if order not in ("smooth-first", "smooth-last"):
        raise ParameterError(f"unknown smoothing order {order!r}")
    if "accel" in trace and "jerk" in trace:
        return trace
    added = {}
    if "accel" in trace:
        accel_raw = trace["accel"]
        accel = accel_raw
    else:
        accel_raw = derivative(trace[speed])
        accel = exp_smooth(accel_raw, alpha) if smooth else accel_raw
        added["accel"] = accel
    if "jerk" not in trace:
        if smooth and order == "smooth-first":
            jerk = exp_smooth(derivative(accel), alpha)
        elif smooth:
            jerk = exp_smooth(derivative(accel_raw), alpha)
        else:
            jerk = derivative(accel)
        added["jerk"] = jerk
    return trace.with_channels(**added)
