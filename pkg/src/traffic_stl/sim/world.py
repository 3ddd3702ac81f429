"""Single-lane corridor with an off-ramp branch, IDM dynamics and V2V beaconing.

State is kept as parallel numpy arrays indexed by vehicle number; vehicle 0
starts at the head of the column. Lane 0 is the mainline, lane 1 the ramp.

One simulation cycle is :func:`comm_round` (beacon exchange, leader/follower
roles, actuated acceleration) followed by :func:`step` (Euler update, ramp
diverge, exits, collision check).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional

import numpy as np

from ..exceptions import CollisionError, ParameterError
from ..signals import CONSTANT, LINEAR, NO_LEADER, Signal, Trace
from .config import ScenarioConfig
from .idm import idm_acceleration_array

MAINLINE, OFFRAMP = 0, 1
ROUTES = ("mainline", "offramp")


@dataclass(frozen=True)
class LeaderRecord:
    leader_id: str
    x_leader: float
    v_leader: float
    received_at: float


@dataclass(frozen=True)
class VehicleState:
    id: str
    x: float
    v: float
    accel_cmd: Optional[float]
    route: str
    lane: str
    is_leader: bool
    is_follower: bool
    leader_record: Optional[LeaderRecord]


@dataclass(frozen=True, eq=False)
class WorldState:
    """Snapshot of every vehicle at ``time``.

    ``accel_cmd`` is NaN for vehicles not actuated by the last beacon round.
    ``leader``/``follower`` hold vehicle indices (-1 for none) of the roles
    agreed over the air; the physical predecessor is recomputed every step.
    """

    config: ScenarioConfig
    time: float
    ids: tuple
    x: np.ndarray
    v: np.ndarray
    v0: np.ndarray
    lane: np.ndarray
    route: np.ndarray
    active: np.ndarray
    accel_cmd: np.ndarray
    leader: np.ndarray
    leader_x: np.ndarray
    leader_v: np.ndarray
    leader_rx: np.ndarray
    follower: np.ndarray
    offramp_position: float

    @property
    def n(self) -> int:
        return len(self.ids)

    def vehicle(self, i: int) -> VehicleState:
        rec = None
        if self.leader[i] >= 0:
            rec = LeaderRecord(
                self.ids[self.leader[i]],
                float(self.leader_x[i]),
                float(self.leader_v[i]),
                float(self.leader_rx[i]),
            )
        cmd = float(self.accel_cmd[i])
        return VehicleState(
            id=self.ids[i],
            x=float(self.x[i]),
            v=float(self.v[i]),
            accel_cmd=None if math.isnan(cmd) else cmd,
            route=ROUTES[self.route[i]],
            lane=ROUTES[self.lane[i]],
            is_leader=bool(self.follower[i] >= 0),
            is_follower=bool(self.leader[i] >= 0),
            leader_record=rec,
        )

    @cached_property
    def pred(self) -> np.ndarray:
        return predecessors(self)

    @cached_property
    def gaps(self) -> np.ndarray:
        return net_gaps(self, self.pred)

    @property
    def vehicles(self) -> list[VehicleState]:
        return [self.vehicle(i) for i in range(self.n) if self.active[i]]

    def evolve(self, **changes) -> "WorldState":
        return replace(self, **changes)


def initial_world(config: ScenarioConfig, comm: Optional[bool] = None) -> WorldState:
    """Place ``n_vehicles`` in a column on the mainline at t = 0.

    Entry headways are exponential with mean ``mean_entry_headway``, floored
    so that each net gap is at least the desired gap of the car-following
    model in force (``ivc_time_gap`` with communication, ``baseline_time_gap``
    without). Each vehicle enters at its own desired speed. The random draws do
    not depend on ``comm``, so paired runs see the same demand.
    """
    comm = config.comm_enabled if comm is None else comm
    n = config.n_vehicles
    rng = np.random.default_rng(config.rng_seed)
    v0 = rng.uniform(config.v0_mean - config.v0_spread, config.v0_mean + config.v0_spread, n)
    headways = rng.exponential(config.mean_entry_headway, n)
    route = (rng.random(n) < config.offramp_fraction).astype(np.int8)
    T_insert = config.ivc_time_gap if comm else config.baseline_time_gap
    net_gap = np.maximum(headways * v0, config.s0 + v0 * T_insert + 0.5 * config.vehicle_length)
    x = np.zeros(n)
    # vehicle 0 at the head; vehicle i sits one gap plus a length behind i-1
    if n:
        offsets = np.concatenate([[0.0], np.cumsum(net_gap[1:] + config.vehicle_length)])
        x = offsets[-1] - offsets
    return world_from_arrays(config, x, v0, v0=v0, route=route)


def world_from_arrays(config: ScenarioConfig, x, v, v0=None, route=None) -> WorldState:
    """A world at t = 0 with vehicles at positions ``x`` (front bumper) moving at ``v``.

    ``v0`` defaults to ``config.v0_mean`` for everyone and ``route`` to the
    mainline. The ramp sits ``offramp_distance`` ahead of the foremost vehicle.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    v = np.broadcast_to(np.asarray(v, dtype=float), (n,)).copy()
    v0 = np.full(n, config.v0_mean) if v0 is None else np.broadcast_to(np.asarray(v0, float), (n,)).copy()
    route = np.zeros(n, dtype=np.int8) if route is None else np.asarray(route, dtype=np.int8)
    head = float(x.max()) if n else 0.0
    neg = np.full(n, -1, dtype=np.intp)
    nan = np.full(n, np.nan)
    return WorldState(
        config=config,
        time=0.0,
        ids=tuple(f"veh{i:03d}" for i in range(n)),
        x=x,
        v=v,
        v0=v0,
        lane=np.zeros(n, dtype=np.int8),
        route=route,
        active=np.ones(n, dtype=bool),
        accel_cmd=nan.copy(),
        leader=neg.copy(),
        leader_x=nan.copy(),
        leader_v=nan.copy(),
        leader_rx=nan.copy(),
        follower=neg.copy(),
        offramp_position=head + config.offramp_distance,
    )


def predecessors(world: WorldState) -> np.ndarray:
    """Index of the nearest active vehicle ahead on the same lane (-1 if none)."""
    pred = np.full(world.n, -1, dtype=np.intp)
    idx = np.flatnonzero(world.active)
    if idx.size == 0:
        return pred
    order = idx[np.lexsort((world.x[idx], world.lane[idx]))]
    same = world.lane[order[:-1]] == world.lane[order[1:]]
    pred[order[:-1][same]] = order[1:][same]
    return pred


def net_gaps(world: WorldState, pred: np.ndarray) -> np.ndarray:
    """Bumper-to-bumper spacing to ``pred`` (``inf`` where there is none)."""
    gap = np.full(world.n, np.inf)
    has = pred >= 0
    gap[has] = world.x[pred[has]] - world.x[has] - world.config.vehicle_length
    return gap


def time_headway(gap: np.ndarray, v: np.ndarray) -> np.ndarray:
    """``gap / v``; stationary vehicles get ``inf``."""
    return np.divide(gap, v, out=np.full(np.shape(gap), np.inf), where=v > 0)


def beacon_matrix(world: WorldState) -> np.ndarray:
    """``m[i, j]`` is True when vehicle ``i`` hears vehicle ``j``'s beacon.

    Propagation is a fixed disc of radius ``comm_range``, so the matrix is
    symmetric.
    """
    x = world.x
    m = np.abs(x[:, None] - x[None, :]) <= world.config.comm_range
    m &= world.active[:, None] & world.active[None, :]
    np.fill_diagonal(m, False)
    return m


def desired_speed(world: WorldState) -> np.ndarray:
    """Per-vehicle desired speed, tapered down to the ramp limit on the off-ramp."""
    cfg = world.config
    v0 = world.v0
    on_ramp = world.lane == OFFRAMP
    if not on_ramp.any():
        return v0
    frac = np.clip((world.x - world.offramp_position) / cfg.offramp_taper, 0.0, 1.0)
    target = np.minimum(v0, cfg.offramp_speed_limit - cfg.offramp_target_margin)
    return np.where(on_ramp, v0 - (v0 - target) * frac, v0)


def comm_round(world: WorldState) -> WorldState:
    """Exchange beacons and assign leader/follower roles.

    Every active vehicle broadcasts ``(id, x, v)``. A receiver takes the
    nearest sender ahead of it on its own lane; if its time headway to that
    sender is below ``headway_threshold`` it declares the sender its leader,
    replies with its own state (the leader records the follower) and sets
    ``accel_cmd`` from IDM with the IVC time gap.
    """
    cfg = world.config
    n = world.n
    pred = world.pred
    gap = world.gaps
    hears = np.zeros(n, dtype=bool)
    has = pred >= 0
    # nearest vehicle ahead on the lane is the only candidate; it must be in range
    hears[has] = np.abs(world.x[pred[has]] - world.x[has]) <= cfg.comm_range
    h = time_headway(gap, world.v)
    declare = hears & (h < cfg.headway_threshold)

    leader = np.full(n, -1, dtype=np.intp)
    follower = np.full(n, -1, dtype=np.intp)
    leader_x = np.full(n, np.nan)
    leader_v = np.full(n, np.nan)
    leader_rx = np.full(n, np.nan)
    accel_cmd = np.full(n, np.nan)
    fi = np.flatnonzero(declare)
    li = pred[fi]
    leader[fi] = li
    follower[li] = fi
    leader_x[fi] = world.x[li]
    leader_v[fi] = world.v[li]
    leader_rx[fi] = world.time
    if fi.size:
        s = leader_x[fi] - world.x[fi] - cfg.vehicle_length
        if np.any(s <= 0):
            k = int(np.flatnonzero(s <= 0)[0])
            raise CollisionError(
                float(s[k]), world.time, world.ids[fi[k]], world.ids[li[k]]
            )
        dv = world.v[fi] - leader_v[fi]
        accel_cmd[fi] = idm_acceleration_array(
            s, world.v[fi], dv, desired_speed(world)[fi], cfg.ivc_idm
        )
    return world.evolve(
        accel_cmd=accel_cmd,
        leader=leader,
        follower=follower,
        leader_x=leader_x,
        leader_v=leader_v,
        leader_rx=leader_rx,
    )


def baseline_acceleration(world: WorldState) -> np.ndarray:
    pred, gap = world.pred, world.gaps
    v = world.v
    dv = np.where(pred >= 0, v - world.v[np.maximum(pred, 0)], 0.0)
    return idm_acceleration_array(gap, v, dv, desired_speed(world), world.config.baseline_idm)


def _check_gaps(world: WorldState):
    pred, gap = world.pred, world.gaps
    bad = np.flatnonzero(gap <= 0)
    if bad.size:
        i = int(bad[0])
        raise CollisionError(float(gap[i]), world.time, world.ids[i], world.ids[pred[i]])


def step(world: WorldState, dt: Optional[float] = None) -> WorldState:
    """Advance the world by ``dt`` seconds (semi-implicit Euler).

    Vehicles actuated in the last beacon round apply ``accel_cmd``; the rest
    follow their physical predecessor with the baseline IDM.
    """
    cfg = world.config
    dt = cfg.dt if dt is None else dt
    if not dt > 0:
        raise ParameterError("dt must be positive")
    accel = baseline_acceleration(world)
    actuated = ~np.isnan(world.accel_cmd)
    accel = np.where(actuated, world.accel_cmd, accel)
    active = world.active
    v = np.where(active, np.maximum(0.0, world.v + accel * dt), world.v)
    x = np.where(active, world.x + v * dt, world.x)

    lane = world.lane.copy()
    diverge = active & (world.route == OFFRAMP) & (lane == MAINLINE) & (x >= world.offramp_position)
    lane[diverge] = OFFRAMP
    exit_ramp = (lane == OFFRAMP) & (x >= world.offramp_position + cfg.offramp_length)
    exit_main = (lane == MAINLINE) & (x >= cfg.corridor_length)
    active = active & ~(exit_ramp | exit_main)

    nxt = world.evolve(time=world.time + dt, x=x, v=v, lane=lane, active=active)
    _check_gaps(nxt)
    return nxt


def _observe(world: WorldState):
    pred, gap = world.pred, world.gaps
    h = np.where(pred >= 0, time_headway(gap, world.v), NO_LEADER)
    return pred, h


def run_world(config: ScenarioConfig, comm: Optional[bool] = None):
    """Simulate ``config`` and return the final world plus the raw record arrays."""
    comm = config.comm_enabled if comm is None else comm
    world = initial_world(config, comm)
    n, steps = world.n, config.n_steps
    shape = (steps + 1, n)
    rec_x = np.full(shape, np.nan)
    rec_v = np.full(shape, np.nan)
    rec_h = np.full(shape, np.nan)
    rec_lead = np.full(shape, -1, dtype=np.intp)
    rec_lane = np.zeros(shape, dtype=np.int8)
    alive = np.zeros(shape, dtype=bool)
    beacon_every = max(1, int(round(config.beacon_period / config.dt)))

    def record(k, w):
        pred, h = _observe(w)
        a = w.active
        alive[k] = a
        rec_x[k, a] = w.x[a]
        rec_v[k, a] = w.v[a]
        rec_h[k, a] = h[a]
        rec_lead[k, a] = pred[a]
        rec_lane[k, a] = w.lane[a]

    _check_gaps(world)
    record(0, world)
    for k in range(1, steps + 1):
        if comm and (k - 1) % beacon_every == 0:
            world = comm_round(world)
        world = step(world, config.dt)
        record(k, world)
        if not world.active.any():
            alive[k + 1 :] = False
            break
    times = np.round(np.arange(steps + 1) * config.dt, 9)
    return world, dict(
        t=times, x=rec_x, v=rec_v, h=rec_h, leader=rec_lead, lane=rec_lane, alive=alive
    )


def run_scenario(config: ScenarioConfig, comm: Optional[bool] = None) -> list[Trace]:
    """Simulate and return one :class:`Trace` per vehicle that was on the road.

    ``comm`` overrides ``config.comm_enabled`` so the baseline and the IVC run
    can be paired on one config. Results depend only on the config.
    """
    if config.n_vehicles == 0:
        return []
    world, rec = run_world(config, comm)
    traces = []
    names = np.array(world.ids + ("",))  # index -1 maps to ""
    for i, vid in enumerate(world.ids):
        rows = np.flatnonzero(rec["alive"][:, i])
        if rows.size == 0:
            continue
        t = rec["t"][rows]
        lead = rec["leader"][rows, i]
        chans = {
            "x": Signal(t, rec["x"][rows, i], LINEAR, "m"),
            "speed": Signal(t, rec["v"][rows, i], LINEAR, "m/s"),
            "headway": Signal(t, rec["h"][rows, i], CONSTANT, "s"),
            "on_offramp": Signal(t, rec["lane"][rows, i].astype(float), CONSTANT),
        }
        labels = {"leader_id": tuple(names[lead].tolist())}
        traces.append(Trace(vid, chans, labels))
    return traces
