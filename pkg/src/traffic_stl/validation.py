"""Input checks shared by the estimator wrappers and the CLI."""

from __future__ import annotations

from typing import Iterable, Union

from .exceptions import MissingChannelError, ParameterError
from .signals import Trace
from .stl import Formula, channels, parse


def check_trace(obj) -> Trace:
    if not isinstance(obj, Trace):
        raise TypeError(f"expected a Trace, got {type(obj).__name__}")
    return obj


def check_traces(X: Union[Trace, Iterable[Trace]]) -> list[Trace]:
    """Coerce ``X`` to a non-empty list of traces."""
    if isinstance(X, Trace):
        return [X]
    try:
        traces = [check_trace(t) for t in X]
    except TypeError as exc:
        raise TypeError(f"X must be a Trace or an iterable of Trace objects: {exc}") from None
    if not traces:
        raise ParameterError("X contains no traces")
    return traces


def check_formula(formula: Union[str, Formula]) -> Formula:
    if isinstance(formula, Formula):
        return formula
    if isinstance(formula, str):
        return parse(formula)
    raise TypeError(f"formula must be DSL text or a Formula, got {type(formula).__name__}")


def check_alpha(alpha) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise ParameterError(f"alpha must be in (0, 1], got {alpha!r}")
    return alpha


def check_channels(trace: Trace, formula: Formula, derivable=("accel", "jerk")) -> None:
    """Raise :class:`MissingChannelError` for the first channel ``trace`` cannot supply."""
    for name in sorted(channels(formula)):
        if name in trace:
            continue
        if name in derivable and "speed" in trace:
            continue
        raise MissingChannelError(name, trace.channels)
