import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from traffic_stl import Trace  # noqa: E402


def grid(n, dt=0.05):
    return np.round(np.arange(n) * dt, 9)


@pytest.fixture
def make_trace():
    """``make_trace(speed=..., headway=..., dt=0.05)`` on a uniform grid."""

    def build(vehicle_id="v", dt=0.05, **channels):
        n = len(next(iter(channels.values())))
        return Trace.from_arrays(vehicle_id, grid(n, dt), **{k: np.asarray(v, float) for k, v in channels.items()})

    return build
