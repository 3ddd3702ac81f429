"""Sliding-window extrema over monotone index windows.

Windows are given as inclusive index bounds ``lo[i] <= hi[i]`` where both
sequences are non-decreasing in ``i``. That covers fixed-width windows on a
uniform grid and time windows on any sorted grid. A monotone deque keeps the
candidate extrema (Lemire's streaming min/max), so each element is pushed and
popped at most once.
"""

from collections import deque

import numpy as np

EPS = 1e-9


def window_bounds(grid: np.ndarray, times: np.ndarray, a: float, b, limit: int):
    """Index windows into ``grid`` for ``[t+a, t+b]`` at every ``t`` in ``times``.

    ``b=None`` stands for the end of the usable range. Indices are capped at
    ``limit`` (inclusive), the last index where the operand is defined. A
    window with no grid point gives ``lo > hi``.
    """
    lo = np.searchsorted(grid, times + a - EPS, side="left")
    if b is None:
        hi = np.full(times.shape, limit, dtype=np.intp)
    else:
        hi = np.searchsorted(grid, times + b + EPS, side="right") - 1
        np.minimum(hi, limit, out=hi)
    return lo, hi


def sliding_extreme(values, lo, hi, kind: str = "min", empty: float | None = None):
    """``out[i] = min/max(values[lo[i]:hi[i]+1])`` in amortised O(1) per output.

    Empty windows yield ``empty`` (default ``+inf`` for min, ``-inf`` for max).
    """
    if kind not in ("min", "max"):
        raise ValueError(f"kind must be 'min' or 'max', got {kind!r}")
    vals = np.asarray(values, dtype=float).tolist()
    lo_l = np.asarray(lo).tolist()
    hi_l = np.asarray(hi).tolist()
    n_out = len(lo_l)
    if empty is None:
        empty = np.inf if kind == "min" else -np.inf
    out = [empty] * n_out
    dq = deque()
    pushed = 0  # next index to enter the deque
    if kind == "min":
        for i in range(n_out):
            l, h = lo_l[i], hi_l[i]
            while pushed <= h:
                v = vals[pushed]
                while dq and vals[dq[-1]] >= v:
                    dq.pop()
                dq.append(pushed)
                pushed += 1
            while dq and dq[0] < l:
                dq.popleft()
            if l <= h and dq:
                out[i] = vals[dq[0]]
    else:
        for i in range(n_out):
            l, h = lo_l[i], hi_l[i]
            while pushed <= h:
                v = vals[pushed]
                while dq and vals[dq[-1]] <= v:
                    dq.pop()
                dq.append(pushed)
                pushed += 1
            while dq and dq[0] < l:
                dq.popleft()
            if l <= h and dq:
                out[i] = vals[dq[0]]
    return np.array(out, dtype=float)


def suffix_extreme(values, kind: str = "min"):
    """Running min/max from each index to the end."""
    v = np.asarray(values, dtype=float)
    acc = np.minimum if kind == "min" else np.maximum
    return acc.accumulate(v[::-1])[::-1]
