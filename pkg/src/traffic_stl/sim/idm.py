"""Intelligent Driver Model: desired gap and acceleration."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..exceptions import CollisionError, ParameterError


@dataclass(frozen=True)
class IdmParams:
    """IDM parameters.

    Attributes
    ----------
    a_max : float
        Maximum acceleration, m/s^2.
    b_comf : float
        Comfortable (desired) deceleration, m/s^2.
    T_gap : float
        Safe time gap, s.
    s0 : float
        Jam distance, m.
    v0 : float
        Desired speed, m/s.
    delta : float
        Free-road acceleration exponent.
    """

    a_max: float = 1.4
    b_comf: float = 2.0
    T_gap: float = 4.0
    s0: float = 2.0
    v0: float = 31.0
    delta: float = 4.0

    def __post_init__(self):
        for name in ("a_max", "b_comf", "T_gap", "v0", "delta"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive, got {getattr(self, name)!r}")
        if self.s0 < 0:
            raise ParameterError(f"s0 must be >= 0, got {self.s0!r}")

    def with_time_gap(self, T_gap: float) -> "IdmParams":
        return replace(self, T_gap=T_gap)


def desired_gap(v, dv, p: IdmParams):
    """Desired minimum gap ``s0 + v*T + v*dv / (2*sqrt(a*b))``.

    ``dv`` is follower speed minus leader speed (positive when closing). The
    raw value is returned; it can drop below ``s0`` when the leader pulls away.
    """
    return p.s0 + v * p.T_gap + v * dv / (2.0 * math.sqrt(p.a_max * p.b_comf))


def idm_acceleration(s, v, dv, p: IdmParams, v0=None) -> float:
    """IDM acceleration for a follower at net gap ``s`` (``math.inf`` for a free road).

    The interaction term uses ``max(s0, desired_gap)``. ``v0`` overrides the
    desired speed in ``p``.
    """
    if not s > 0:
        raise CollisionError(float(s))
    v0 = p.v0 if v0 is None else v0
    free = (v / v0) ** p.delta
    if math.isinf(s):
        return p.a_max * (1.0 - free)
    s_star = max(p.s0, desired_gap(v, dv, p))
    return p.a_max * (1.0 - free - (s_star / s) ** 2)


def idm_acceleration_array(s, v, dv, v0, p: IdmParams) -> np.ndarray:
    """Vectorised :func:`idm_acceleration`; ``s`` may contain ``inf``, never values <= 0."""
    s = np.asarray(s, dtype=float)
    v = np.asarray(v, dtype=float)
    s_star = np.maximum(p.s0, p.s0 + v * p.T_gap + v * dv / (2.0 * math.sqrt(p.a_max * p.b_comf)))
    # s_star / inf is 0, so free-road entries need no special case
    return p.a_max * (1.0 - (v / v0) ** p.delta - (s_star / s) ** 2)
