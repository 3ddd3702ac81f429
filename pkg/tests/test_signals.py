import math

import numpy as np
import pytest

from traffic_stl import Sample, Signal, Trace, derivative, derive_motion_channels, exp_smooth, value_at
from traffic_stl.exceptions import DomainError, InsufficientDataError, MissingChannelError, ParameterError


class TestValueAt:
    def test_linear_midpoint(self):
        assert value_at(Signal([0, 1], [1, 3], "linear"), 0.5) == 2.0

    def test_constant_holds_left_sample(self):
        assert value_at(Signal([0, 1], [1, 3], "constant"), 0.5) == 1.0

    @pytest.mark.parametrize("mode", ["linear", "constant"])
    def test_single_sample(self, mode):
        assert value_at(Signal([0], [5], mode), 0) == 5.0

    def test_exact_at_samples(self):
        s = Signal([0, 0.1, 0.3], [0.1, 0.7, -2.2])
        assert [s.value_at(t) for t in (0, 0.1, 0.3)] == [0.1, 0.7, -2.2]

    def test_out_of_domain_names_interval(self):
        with pytest.raises(DomainError) as info:
            value_at(Signal([0, 1], [1, 3]), 1.5)
        assert info.value.interval == (0.0, 1.0)
        assert "[0.0, 1.0]" in str(info.value)

    def test_infinite_values_between_samples(self):
        s = Signal([0, 1], [math.inf, math.inf])
        assert s.value_at(0.5) == math.inf

    def test_vectorised_matches_scalar(self):
        s = Signal([0, 1, 3], [0, 2, -2])
        ts = np.linspace(0, 3, 13)
        assert np.allclose(s.values_at(ts), [s.value_at(t) for t in ts])
        with pytest.raises(DomainError):
            s.values_at([-0.1])


class TestSignalValidation:
    def test_rejects_non_increasing_times(self):
        with pytest.raises(ParameterError):
            Signal([0, 1, 1], [0, 0, 0])

    def test_rejects_nan(self):
        with pytest.raises(ParameterError):
            Signal([0, 1], [0, math.nan])

    def test_rejects_empty(self):
        with pytest.raises(InsufficientDataError):
            Signal([], [])

    def test_rejects_unknown_interpolation(self):
        with pytest.raises(ParameterError):
            Signal([0], [0], "cubic")

    def test_immutable_arrays(self):
        s = Signal([0, 1], [1, 2])
        with pytest.raises(ValueError):
            s.values[0] = 9

    def test_samples_round_trip(self):
        s = Signal.from_samples([(0, 1), (2, 3)], "constant", "m")
        assert s.samples == [Sample(0.0, 1.0), Sample(2.0, 3.0)]
        assert s == Signal([0, 2], [1, 3], "constant", "m")
        assert s.domain == (0.0, 2.0)


class TestDerivative:
    def test_constant_gives_zero(self):
        d = derivative(Signal([0, 0.5, 1.5, 2], [7, 7, 7, 7]))
        assert np.all(d.values == 0)

    def test_linear_ramp(self):
        d = derivative(Signal([0, 1, 2, 3], [0, 2, 4, 6]))
        assert d.values.tolist() == [2.0, 2.0, 2.0, 2.0]

    def test_square_uses_central_and_one_sided_stencils(self):
        t = np.array([0.0, 1, 2, 3])
        assert derivative(Signal(t, t**2)).values.tolist() == [1.0, 2.0, 4.0, 5.0]

    def test_needs_two_samples(self):
        with pytest.raises(InsufficientDataError):
            derivative(Signal([0], [1]))

    def test_non_uniform_grid(self):
        t = np.array([0.0, 0.1, 0.4, 0.5])
        d = derivative(Signal(t, 3 * t))
        assert np.allclose(d.values, 3.0)


class TestExpSmooth:
    def test_hand_unrolled(self):
        out = exp_smooth(Signal([0, 1, 2, 3], [0, 1, 1, 1]), 0.5)
        assert out.values.tolist() == [0.0, 0.5, 0.75, 0.875]

    def test_alpha_one_is_identity(self):
        s = Signal([0, 1, 2], [3, -1, 4])
        assert exp_smooth(s, 1.0) == s

    @pytest.mark.parametrize("alpha", [0.01, 0.3, 0.9])
    def test_constant_is_fixed_point(self, alpha):
        s = Signal([0, 1, 2, 3], [4.2] * 4)
        assert np.allclose(exp_smooth(s, alpha).values, 4.2)

    @pytest.mark.parametrize("alpha", [0.0, -0.1, 1.5, math.nan])
    def test_alpha_out_of_range(self, alpha):
        with pytest.raises(ParameterError):
            exp_smooth(Signal([0], [0]), alpha)


class TestTrace:
    def test_channels_must_share_domain(self):
        with pytest.raises(ParameterError):
            Trace("v", {"a": Signal([0, 1], [0, 0]), "b": Signal([0, 2], [0, 0])})

    def test_missing_channel(self, make_trace):
        tr = make_trace(speed=[1, 2])
        with pytest.raises(MissingChannelError) as info:
            tr["headway"]
        assert "speed" in str(info.value)

    def test_time_domain_and_duration(self, make_trace):
        tr = make_trace(speed=[1, 2, 3, 4, 5])
        assert tr.time_domain == (0.0, 0.2)
        assert tr.duration == pytest.approx(0.2)

    def test_default_interpolation_per_channel(self, make_trace):
        tr = make_trace(speed=[1, 2], headway=[1, 2])
        assert tr["speed"].interpolation == "linear"
        assert tr["headway"].interpolation == "constant"


class TestMotionChannels:
    def test_constant_speed_gives_zero_accel_and_jerk(self, make_trace):
        tr = derive_motion_channels(make_trace(speed=[20.0] * 50))
        assert np.all(tr["accel"].values == 0) and np.all(tr["jerk"].values == 0)

    def test_accel_step_jerk_unsmoothed(self):
        # accel drops 0 -> -5 within one 50 ms sample; the central stencil
        # spreads the step over two intervals: -5 / 0.1 = -50 m/s^3
        t = np.round(np.arange(20) * 0.05, 9)
        accel = np.where(np.arange(20) < 10, 0.0, -5.0)
        tr = derive_motion_channels(Trace.from_arrays("b", t, speed=30 + np.zeros(20), accel=accel), smooth=False)
        assert tr["jerk"].values.min() == pytest.approx(-50.0)

    def test_existing_channels_untouched(self, make_trace):
        tr = make_trace(speed=[1, 2, 3], accel=[9, 9, 9])
        out = derive_motion_channels(tr)
        assert out["accel"] is tr["accel"]
        assert "jerk" in out

    def test_orders_differ_only_with_smoothing(self, make_trace):
        tr = make_trace(speed=np.sin(np.arange(40) / 3.0))
        a = derive_motion_channels(tr, smooth=False, order="smooth-first")
        b = derive_motion_channels(tr, smooth=False, order="smooth-last")
        assert np.array_equal(a["jerk"].values, b["jerk"].values)
        c = derive_motion_channels(tr, order="smooth-last")
        d = derive_motion_channels(tr, order="smooth-first")
        assert not np.array_equal(c["jerk"].values, d["jerk"].values)

    def test_unknown_order(self, make_trace):
        with pytest.raises(ParameterError):
            derive_motion_channels(make_trace(speed=[1, 2]), order="sideways")

    def test_missing_speed(self, make_trace):
        with pytest.raises(MissingChannelError):
            derive_motion_channels(make_trace(headway=[1, 2]))
