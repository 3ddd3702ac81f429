"""Offline robustness monitoring on the sample grid of a trace.

Every node is evaluated once into an array over the grid prefix on which it is
defined. Bounded windows go through the monotone-deque extrema in
:mod:`.windows`; unbounded Until uses the backward recurrence
``U[k] = min(phi[k], max(psi[k], U[k+1]))``. Bounded Until reduces to those two
via the identity::

    max_{j in [j0, j1]} min(psi[j], min phi[i..j])
        = min(min phi[i..j0], U[j0], max psi[j0..j1])

so no operator costs more than O(n).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exceptions import HorizonError
from ..signals import CONSTANT, Signal, Trace
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
    to_text,
)
from .windows import EPS, sliding_extreme, suffix_extreme, window_bounds


@dataclass(frozen=True, eq=False)
class Verdict:
    """Monitoring result for one (trace, formula) pair.

    ``satisfaction`` holds +1 where robustness is strictly positive and -1
    elsewhere; a robustness of exactly zero counts as a violation.
    """

    vehicle_id: str
    formula: Formula
    robustness: Signal
    satisfaction: Signal
    horizon: tuple[float, float]

    @property
    def summary(self) -> float:
        return float(self.robustness.values[0])

    @property
    def satisfied(self) -> bool:
        return self.summary > 0

    def to_dict(self) -> dict:
        return {
            "vehicle_id": self.vehicle_id,
            "formula": to_text(self.formula),
            "summary_robustness": self.summary,
            "satisfied": self.satisfied,
            "horizon": [self.horizon[0], self.horizon[1]],
        }


def horizon_index(grid: np.ndarray, depth: float) -> int:
    """Last grid index ``i`` with ``grid[i] <= grid[-1] - depth`` (``-1`` if none)."""
    return int(np.searchsorted(grid, grid[-1] - depth + EPS, side="right")) - 1


def atom_robustness(pred, trace: Trace, times) -> np.ndarray:
    rho = np.asarray(pred.margin(trace[pred.channel].values_at(times)), dtype=float)
    if pred.mask is not None:
        guard = trace[pred.mask.channel].values_at(times)
        rho = np.where(pred.mask.active(guard), np.inf, rho)
    return rho


def unbounded_until(phi: np.ndarray, psi: np.ndarray) -> np.ndarray:
    n = min(phi.size, psi.size)
    phi_l = phi[:n].tolist()
    psi_l = psi[:n].tolist()
    out = [0.0] * n
    nxt = -np.inf
    for k in range(n - 1, -1, -1):
        p = psi_l[k]
        if nxt > p:
            p = nxt
        f = phi_l[k]
        nxt = f if f < p else p
        out[k] = nxt
    return np.array(out, dtype=float)


class _Evaluator:
    def __init__(self, trace: Trace):
        self.trace = trace
        self.grid = trace.grid
        self.cache: dict[int, np.ndarray] = {}

    def limit(self, f: Formula) -> int:
        return horizon_index(self.grid, temporal_depth(f))

    def eval(self, f: Formula) -> np.ndarray:
        key = id(f)
        hit = self.cache.get(key)
        if hit is None:
            hit = self._eval(f)
            self.cache[key] = hit
        return hit

    def _eval(self, f: Formula) -> np.ndarray:
        if isinstance(f, Atom):
            return atom_robustness(f.predicate, self.trace, self.grid)
        if isinstance(f, Not):
            return -self.eval(f.arg)
        if isinstance(f, (And, Or, Implies)):
            left = self.eval(f.left)
            right = self.eval(f.right)
            n = min(left.size, right.size)
            if isinstance(f, And):
                return np.minimum(left[:n], right[:n])
            if isinstance(f, Or):
                return np.maximum(left[:n], right[:n])
            return np.maximum(-left[:n], right[:n])
        if isinstance(f, (Always, Eventually)):
            child = self.eval(f.arg)
            n = self.limit(f) + 1
            kind = "min" if isinstance(f, Always) else "max"
            iv = f.interval
            if iv.unbounded and iv.lo == 0:
                return suffix_extreme(child, kind)[:n]
            lo, hi = window_bounds(self.grid, self.grid[:n], iv.lo, iv.hi, child.size - 1)
            return sliding_extreme(child, lo, hi, kind)
        if isinstance(f, Until):
            phi = self.eval(f.left)
            psi = self.eval(f.right)
            m = min(phi.size, psi.size)
            phi, psi = phi[:m], psi[:m]
            n = self.limit(f) + 1
            iv = f.interval
            until = unbounded_until(phi, psi)
            if iv.unbounded and iv.lo == 0:
                return until[:n]
            j0, j1 = window_bounds(self.grid, self.grid[:n], iv.lo, iv.hi, m - 1)
            head = sliding_extreme(phi, np.arange(n), np.minimum(j0, m - 1), "min")
            reach = sliding_extreme(psi, j0, j1, "max")
            tail = np.where(j0 <= j1, until[np.minimum(j0, m - 1)], -np.inf)
            return np.minimum(np.minimum(head, tail), reach)
        raise TypeError(f"not a formula node: {f!r}")


def robustness_signal(formula: Formula, trace: Trace) -> np.ndarray:
    """Robustness at every grid time of the horizon (may be empty)."""
    return _Evaluator(trace).eval(formula)


def monitor(formula: Formula, trace: Trace) -> Verdict:
    """Robustness and satisfaction signals of ``formula`` over ``trace``.

    Values are reported for grid times ``t <= t_end - depth``, where ``depth``
    is the formula's temporal reach; later times would need samples past the
    end of the trace.
    """
    grid = trace.grid
    depth = temporal_depth(formula)
    n = horizon_index(grid, depth) + 1
    if n <= 0:
        raise HorizonError(
            f"trace {trace.vehicle_id!r} lasts {trace.duration:g} s but the formula "
            f"looks {depth:g} s ahead; the trace must last at least {depth:g} s"
        )
    rho = _Evaluator(trace).eval(formula)
    times = grid[:n]
    sat = np.where(rho > 0, 1.0, -1.0)
    return Verdict(
        vehicle_id=trace.vehicle_id,
        formula=formula,
        robustness=Signal(times, rho, CONSTANT),
        satisfaction=Signal(times, sat, CONSTANT),
        horizon=(float(times[0]), float(times[-1])),
    )
