"""scikit-learn style wrappers.

``X`` is always a sequence of :class:`~traffic_stl.signals.Trace` objects, so
the monitors drop into :class:`sklearn.pipeline.Pipeline` next to the
channel transformers::

    Pipeline([("motion", MotionChannels()), ("spec", TrafficSpecMonitor("braking"))])

Predicted labels are +1 (conforming) and -1 (violating).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .signals import DEFAULT_ALPHA, derive_motion_channels, exp_smooth
from .specs import (
    DEFAULT_STATISTIC,
    SPEC_BUILDERS,
    make_params,
    monitor_population,
    summarize,
)
from .stl import channels, temporal_depth
from .validation import check_alpha, check_channels, check_formula, check_traces


class STLMonitor(ClassifierMixin, BaseEstimator):
    """Classify traces as conforming or violating a formula.

    Parameters
    ----------
    formula : str or Formula
        DSL text or a syntax tree.
    smooth : bool, default=True
        Smooth derived acceleration/jerk channels.
    alpha : float, default=0.3
        Exponential smoothing factor for derived channels.
    n_jobs : int or None
        Threads used for monitoring; ``None`` reads ``TRAFFIC_STL_THREADS``.

    Attributes
    ----------
    formula_ : Formula
        Parsed formula.
    temporal_depth_ : float
        Seconds of look-ahead the formula needs past any evaluation time.
    classes_ : ndarray of shape (2,)
        ``[-1, 1]``.
    """

    def __init__(self, formula="always (speed >= 0)", smooth=True, alpha=DEFAULT_ALPHA, n_jobs=None):
        self.formula = formula
        self.smooth = smooth
        self.alpha = alpha
        self.n_jobs = n_jobs

    def _build_formula(self):
        return check_formula(self.formula)

    def fit(self, X=None, y=None):
        """Parse the formula; traces in ``X``, if given, are checked for the needed channels."""
        check_alpha(self.alpha)
        self.formula_ = self._build_formula()
        self.temporal_depth_ = temporal_depth(self.formula_)
        self.channels_ = sorted(channels(self.formula_))
        self.classes_ = np.array([-1, 1])
        if X is not None:
            for tr in check_traces(X):
                check_channels(tr, self.formula_)
        return self

    def monitor(self, X):
        check_is_fitted(self)
        traces = check_traces(X)
        return monitor_population(
            traces, self.formula_, smooth=self.smooth, alpha=self.alpha, workers=self.n_jobs
        )

    def decision_function(self, X):
        """Summary robustness of each trace (robustness at its first sample)."""
        return np.array([v.summary for v in self.monitor(X)])

    def predict(self, X):
        return np.where(self.decision_function(X) > 0, 1, -1)


class TrafficSpecMonitor(STLMonitor):
    """:class:`STLMonitor` over one of the built-in specs.

    Parameters
    ----------
    spec : {"speed", "braking", "offramp", "headway"}
    params : dict, optional
        Overrides for the spec's parameter object, e.g. ``{"h_min": 3.5}``.
    """

    def __init__(self, spec="headway", params=None, smooth=True, alpha=DEFAULT_ALPHA, n_jobs=None):
        self.spec = spec
        self.params = params
        self.smooth = smooth
        self.alpha = alpha
        self.n_jobs = n_jobs

    def _build_formula(self):
        self.params_ = make_params(self.spec, self.params)
        return SPEC_BUILDERS[self.spec][1](self.params_)

    def report(self, X, statistic_channel=None):
        """Conforming vs violating split of ``X`` as a :class:`ConformanceReport`."""
        traces = check_traces(X)
        channel = statistic_channel or DEFAULT_STATISTIC[self.spec]
        return summarize(traces, self.monitor(traces), channel, self.spec)


class MotionChannels(TransformerMixin, BaseEstimator):
    """Add derived ``accel`` and ``jerk`` channels to each trace."""

    def __init__(self, smooth=True, alpha=DEFAULT_ALPHA, order="smooth-first"):
        self.smooth = smooth
        self.alpha = alpha
        self.order = order

    def fit(self, X=None, y=None):
        check_alpha(self.alpha)
        return self

    def transform(self, X):
        return [
            derive_motion_channels(tr, self.smooth, self.alpha, self.order)
            for tr in check_traces(X)
        ]


class ExponentialSmoother(TransformerMixin, BaseEstimator):
    """Exponentially smooth selected channels of each trace."""

    def __init__(self, alpha=DEFAULT_ALPHA, channels=("speed",)):
        self.alpha = alpha
        self.channels = channels

    def fit(self, X=None, y=None):
        check_alpha(self.alpha)
        return self

    def transform(self, X):
        alpha = check_alpha(self.alpha)
        out = []
        for tr in check_traces(X):
            out.append(tr.with_channels(**{c: exp_smooth(tr[c], alpha) for c in self.channels}))
        return out
