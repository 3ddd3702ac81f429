import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import Pipeline

from traffic_stl import ExponentialSmoother, MotionChannels, STLMonitor, Trace, TrafficSpecMonitor
from traffic_stl.exceptions import MissingChannelError, ParameterError, ParseError
from traffic_stl.stl import parse


def const(value, vid, n=201, channel="speed"):
    t = np.round(np.arange(n) * 0.05, 9)
    return Trace.from_arrays(vid, t, **{channel: np.full(n, float(value))})


@pytest.fixture
def fleet():
    return [const(25, "a"), const(19.27, "b"), const(23.66, "c")]


def test_stl_monitor_predicts_signs(fleet):
    est = STLMonitor("always speed >= 22.5").fit(fleet)
    assert est.predict(fleet).tolist() == [1, -1, 1]
    assert np.allclose(est.decision_function(fleet), [2.5, -3.23, 1.16])
    assert est.classes_.tolist() == [-1, 1]
    assert est.channels_ == ["speed"]


def test_score_uses_accuracy(fleet):
    est = STLMonitor("always speed >= 22.5").fit(fleet)
    assert est.score(fleet, [1, -1, -1]) == pytest.approx(2 / 3)


def test_accepts_formula_objects_and_clones():
    est = STLMonitor(parse("eventually[0,1] speed > 3"), alpha=0.5)
    params = clone(est).get_params()
    assert params["alpha"] == 0.5 and params["formula"] == est.formula
    assert est.fit().temporal_depth_ == 1.0


def test_unfitted_predict_raises(fleet):
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        STLMonitor().predict(fleet)


def test_validation_errors(fleet):
    with pytest.raises(ParseError):
        STLMonitor("always speed >=").fit()
    with pytest.raises(ParameterError):
        STLMonitor(alpha=2).fit()
    with pytest.raises(MissingChannelError):
        STLMonitor("always headway > 1").fit(fleet)
    with pytest.raises(ParameterError):
        STLMonitor().fit().predict([])
    with pytest.raises(TypeError):
        STLMonitor().fit().predict([1, 2])


def test_traffic_spec_monitor_report(fleet):
    est = TrafficSpecMonitor("speed", params={"bounds": "min"}).fit(fleet)
    rep = est.report(fleet)
    assert (rep.conforming.volume, rep.violating.volume) == (2, 1)
    assert rep.violating.mean == pytest.approx(19.27)
    assert est.params_.bounds == "min"


def test_braking_pipeline():
    t = np.round(np.arange(101) * 0.05, 9)
    traces = [Trace.from_arrays(str(a), t, speed=30 + a * t) for a in (-8.0, -2.0)]
    pipe = Pipeline([("motion", MotionChannels()), ("spec", TrafficSpecMonitor("braking"))])
    assert pipe.fit(traces).predict(traces).tolist() == [-1, 1]


def test_unknown_spec():
    with pytest.raises(ParameterError):
        TrafficSpecMonitor("nope").fit()


def test_smoother_transform():
    t = np.arange(4.0)
    tr = Trace.from_arrays("s", t, speed=[0, 1, 1, 1])
    (out,) = ExponentialSmoother(alpha=0.5).fit_transform([tr])
    assert out["speed"].values.tolist() == [0.0, 0.5, 0.75, 0.875]


def test_motion_channels_transform_adds_channels():
    (out,) = MotionChannels(smooth=False).fit_transform(const(20, "m"))
    assert {"accel", "jerk"} <= set(out.channels)


def test_thread_count_does_not_change_results(fleet):
    a = STLMonitor("always speed >= 22.5", n_jobs=1).fit().decision_function(fleet * 4)
    b = STLMonitor("always speed >= 22.5", n_jobs=4).fit().decision_function(fleet * 4)
    assert np.array_equal(a, b)
