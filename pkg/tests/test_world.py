import numpy as np
import pytest

from traffic_stl.exceptions import CollisionError, ConfigError
from traffic_stl.sim import (
    ScenarioConfig,
    beacon_matrix,
    comm_round,
    desired_gap,
    initial_world,
    load_config,
    parse_config,
    run_scenario,
    run_world,
    step,
    world_from_arrays,
)
from traffic_stl.sim.world import baseline_acceleration

LEN = 5.0  # default vehicle length


def pair(follower_v, net_gap, leader_v=None, **cfg):
    config = ScenarioConfig(**cfg)
    leader_v = follower_v if leader_v is None else leader_v
    return world_from_arrays(config, [net_gap + LEN, 0.0], [leader_v, follower_v])


class TestBeaconing:
    def test_out_of_range(self):
        w = pair(25.0, 600.0 - LEN, comm_range=500.0)
        assert not beacon_matrix(w).any()
        w = comm_round(w)
        assert (w.leader == -1).all() and (w.follower == -1).all()
        assert np.isnan(w.accel_cmd).all()

    def test_short_headway_declares_leader(self):
        w = comm_round(pair(25.0, 80.0))  # 80 / 25 = 3.2 s < 4 s
        assert w.leader.tolist() == [-1, 0]
        assert w.follower.tolist() == [1, -1]
        follower, leader = w.vehicle(1), w.vehicle(0)
        assert follower.is_follower and leader.is_leader
        assert follower.accel_cmd is not None
        assert follower.leader_record.leader_id == "veh000"
        assert follower.leader_record.x_leader == 85.0

    def test_long_headway_keeps_default_car_following(self):
        w = comm_round(pair(25.0, 120.0))  # 4.8 s
        assert (w.leader == -1).all()
        assert w.vehicle(1).accel_cmd is None

    def test_actuation_uses_ivc_time_gap(self):
        w = comm_round(pair(25.0, 80.0))
        cfg = w.config
        s_star = max(cfg.s0, desired_gap(25.0, 0.0, cfg.ivc_idm))
        want = cfg.a_max * (1 - (25.0 / cfg.v0_mean) ** 4 - (s_star / 80.0) ** 2)
        assert w.accel_cmd[1] == pytest.approx(want)


class TestDynamics:
    def test_free_flow_single_vehicle(self):
        w = world_from_arrays(ScenarioConfig(), [0.0], [25.0], v0=25.0)
        for _ in range(200):
            nxt = step(w)
            assert abs(nxt.v[0] - w.v[0]) < 1e-6
            w = nxt

    def test_standstill_follower_at_minimum_gap(self):
        w = world_from_arrays(ScenarioConfig(), [2.0 + LEN, 0.0], [0.0, 0.0])
        assert baseline_acceleration(w)[1] == 0.0
        assert step(w).v[1] == 0.0

    def test_follower_converges_to_desired_gap(self):
        cfg = ScenarioConfig(comm_enabled=False)
        w = world_from_arrays(cfg, [300.0, 0.0], [10.0, 25.0], v0=[10.0, 25.0])
        for _ in range(int(round(300 / cfg.dt))):
            w = step(w)
        gap = w.x[0] - w.x[1] - LEN
        s_star = desired_gap(w.v[1], w.v[1] - w.v[0], cfg.baseline_idm)
        assert abs(gap - s_star) / s_star < 0.05

    def test_overlap_raises_collision_naming_pair(self):
        w = world_from_arrays(ScenarioConfig(), [LEN - 1.0, 0.0], [0.0, 0.0])
        with pytest.raises(CollisionError) as info:
            step(w)
        assert (info.value.follower_id, info.value.leader_id) == ("veh001", "veh000")
        assert "veh001" in str(info.value)

    def test_speed_never_negative(self):
        w = world_from_arrays(ScenarioConfig(), [10.0, 0.0], [0.0, 3.0])
        for _ in range(40):
            w = step(w)
            assert (w.v >= 0).all()


class TestScenario:
    def test_single_vehicle_has_no_leader(self):
        (tr,) = run_scenario(ScenarioConfig(n_vehicles=1, duration=5))
        assert np.all(tr["headway"].values == -1)
        assert set(tr.labels["leader_id"]) == {""}

    def test_empty_scenario(self):
        assert run_scenario(ScenarioConfig(n_vehicles=0)) == []

    def test_same_seed_is_deterministic(self):
        cfg = ScenarioConfig(n_vehicles=20, duration=10, rng_seed=7)
        a, b = run_scenario(cfg), run_scenario(cfg)
        for x, y in zip(a, b, strict=True):
            assert x.vehicle_id == y.vehicle_id
            for name in x.channels:
                assert x[name] == y[name]

    def test_paired_runs_share_demand(self):
        cfg = ScenarioConfig(n_vehicles=30, rng_seed=2)
        a, b = initial_world(cfg, comm=False), initial_world(cfg, comm=True)
        assert np.array_equal(a.v0, b.v0) and np.array_equal(a.route, b.route)

    def test_comm_raises_safe_headway_fraction(self):
        cfg = ScenarioConfig(rng_seed=11, mean_entry_headway=1.5, duration=40)

        def frac(comm):
            h = np.concatenate([t["headway"].values for t in run_scenario(cfg, comm=comm)])
            h = h[h >= 0]
            return np.mean(h >= 4.0)

        assert frac(True) > frac(False)

    def test_record_shapes_and_times(self):
        cfg = ScenarioConfig(n_vehicles=5, duration=1.0)
        world, rec = run_world(cfg)
        assert rec["t"].tolist()[:3] == [0.0, 0.05, 0.1]
        assert rec["x"].shape == (21, 5)

    def test_ramp_vehicles_take_the_ramp(self):
        cfg = ScenarioConfig(n_vehicles=40, rng_seed=1, offramp_fraction=0.5)
        traces = run_scenario(cfg)
        assert any(t["on_offramp"].values.max() == 1 for t in traces)


class TestConfigFile:
    def test_parse_and_round_trip(self):
        cfg = parse_config("# demo\nn_vehicles = 12\ncomm_enabled = off\ndt=0.1  # coarse\n")
        assert (cfg.n_vehicles, cfg.comm_enabled, cfg.dt) == (12, False, 0.1)
        assert parse_config(cfg.to_text()) == cfg

    @pytest.mark.parametrize(
        "text, line",
        [("speed = 3\n", 1), ("dt = 0.1\ndt = 0.2\n", 2), ("\nn_vehicles = many\n", 2), ("just words\n", 1)],
    )
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(ConfigError) as info:
            parse_config(text, "scenario.cfg")
        assert info.value.line == line
        assert f"scenario.cfg:{line}" in str(info.value)

    def test_invalid_value_range(self):
        with pytest.raises(ConfigError):
            parse_config("dt = -1\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "nope.cfg")
