"""Pointwise robustness straight from the quantitative semantics.

This path shares nothing with :mod:`.monitor` beyond the AST: windows are
found by bisecting the sample times, and every min/max is taken over an
explicit list of values. It is O(n * window) and exists to cross-check the
sliding-window monitor and to answer single-time queries.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right

from ..exceptions import HorizonError
from ..signals import Trace
from .ast import (
    Always,
    And,
    Atom,
    Eventually,
    Formula,
    Implies,
    Not,
    Or,
    Until,
    temporal_depth,
)

_EPS = 1e-9
_INF = math.inf


class _Pointwise:
    def __init__(self, trace: Trace):
        self.trace = trace
        self.grid = trace.grid.tolist()
        self.t_end = self.grid[-1]
        self.memo: dict = {}

    def window(self, t, a, b, upper):
        """Grid times in ``[t+a, t+b]`` clipped to ``upper``."""
        hi_t = upper if b is None else min(t + b, upper)
        lo_i = bisect_left(self.grid, t + a - _EPS)
        hi_i = bisect_right(self.grid, hi_t + _EPS)
        return self.grid[lo_i:hi_i]

    def upper(self, f):
        return self.t_end - temporal_depth(f)

    def rho(self, f: Formula, t: float) -> float:
        key = (id(f), t)
        if key in self.memo:
            return self.memo[key]
        val = self._rho(f, t)
        self.memo[key] = val
        return val

    def _rho(self, f, t):
        if isinstance(f, Atom):
            p = f.predicate
            if p.mask is not None and p.mask.active(self.trace[p.mask.channel].value_at(t)):
                return _INF
            return float(p.margin(self.trace[p.channel].value_at(t)))
        if isinstance(f, Not):
            return -self.rho(f.arg, t)
        if isinstance(f, And):
            return min(self.rho(f.left, t), self.rho(f.right, t))
        if isinstance(f, Or):
            return max(self.rho(f.left, t), self.rho(f.right, t))
        if isinstance(f, Implies):
            return max(-self.rho(f.left, t), self.rho(f.right, t))
        if isinstance(f, Always):
            pts = self.window(t, f.interval.lo, f.interval.hi, self.upper(f.arg))
            return min((self.rho(f.arg, s) for s in pts), default=_INF)
        if isinstance(f, Eventually):
            pts = self.window(t, f.interval.lo, f.interval.hi, self.upper(f.arg))
            return max((self.rho(f.arg, s) for s in pts), default=-_INF)
        if isinstance(f, Until):
            upper = min(self.upper(f.left), self.upper(f.right))
            pts = self.window(t, f.interval.lo, f.interval.hi, upper)
            if not pts:
                return -_INF
            # phi must hold on [t, t']: t itself plus every grid time in (t, t']
            first = bisect_right(self.grid, t + _EPS)
            best = -_INF
            run = self.rho(f.left, t)
            k = first
            for s in pts:
                while k < len(self.grid) and self.grid[k] <= s + _EPS:
                    run = min(run, self.rho(f.left, self.grid[k]))
                    k += 1
                best = max(best, min(self.rho(f.right, s), run))
            return best
        raise TypeError(f"not a formula node: {f!r}")


def robustness(formula: Formula, trace: Trace, t: float) -> float:
    """Robustness of ``formula`` on ``trace`` at time ``t``.

    ``t`` need not be a sample time: atoms interpolate, temporal windows
    collect the sample times inside ``[t+a, t+b]``.
    """
    t0, t1 = trace.time_domain
    limit = t1 - temporal_depth(formula)
    if not (t0 - _EPS <= t <= limit + _EPS):
        raise HorizonError(f"t={t!r} outside the formula's horizon [{t0!r}, {limit!r}]")
    return _Pointwise(trace).rho(formula, float(t))


def naive_robustness_signal(formula: Formula, trace: Trace) -> list[float]:
    """Robustness at every sample time of the horizon, one point at a time."""
    ev = _Pointwise(trace)
    limit = ev.upper(formula)
    return [ev.rho(formula, t) for t in ev.grid if t <= limit + _EPS]
