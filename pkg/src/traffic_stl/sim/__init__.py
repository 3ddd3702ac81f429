"""Single-lane IDM micro-simulator with simulated V2V beaconing."""

from .config import ScenarioConfig, load_config, parse_config
from .idm import IdmParams, desired_gap, idm_acceleration, idm_acceleration_array
from .world import (
    LeaderRecord,
    VehicleState,
    WorldState,
    beacon_matrix,
    comm_round,
    initial_world,
    predecessors,
    run_scenario,
    run_world,
    step,
    world_from_arrays,
)

__all__ = [
    "IdmParams",
    "LeaderRecord",
    "ScenarioConfig",
    "VehicleState",
    "WorldState",
    "beacon_matrix",
    "comm_round",
    "desired_gap",
    "idm_acceleration",
    "idm_acceleration_array",
    "initial_world",
    "load_config",
    "parse_config",
    "predecessors",
    "run_scenario",
    "run_world",
    "step",
    "world_from_arrays",
]
