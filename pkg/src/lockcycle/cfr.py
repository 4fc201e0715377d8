"""Case-fatality estimation from daily cases and deaths.

Daily deaths are modelled as a delayed geometric convolution of daily new
cases: the kernel puts weight b*a**(i-k) on cases i days back for i >= k and
nothing before the delay k.  The kernel mass b/(1-a) is the case-fatality
rate.  Because the kernel is a single geometric tail, the convolution reduces
to the exact one-pole state recursion s(t) = a*s(t-1) + n(t-k), d(t) = b*s(t),
which is what both prediction and fitting run on.

Fitting minimises the sum of squared residuals between smoothed observed
deaths and the smoothed-case prediction: for a fixed decay a the scale b is a
closed-form least-squares solution, the decay is found by golden-section
search on (0, 1) seeded by a coarse grid scan, and the integer delay k is
chosen by exhaustive search over a small range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .series import DailySeries, moving_average

__all__ = [
    "CfrModel",
    "cfr_from_params",
    "predict_deaths",
    "fit",
    "parameter_cvs",
]


@dataclass(frozen=True)
class CfrModel:
    """Fitted (or assumed) delay-kernel parameters.

    delay_k is the dead time in days, decay_a the geometric decay in [0, 1),
    scale_b the kernel scale.  cv_a/cv_b are percent coefficients of
    variation from the linearised covariance at the optimum, when available.
    """

    delay_k: int
    decay_a: float
    scale_b: float
    sse: float | None = None
    cv_a: float | None = None
    cv_b: float | None = None
    fitted_deaths: DailySeries | None = None

    def __post_init__(self):
        if self.delay_k < 0 or int(self.delay_k) != self.delay_k:
            raise ValueError("delay_k must be a non-negative integer")
        if not 0.0 <= self.decay_a < 1.0:
            raise ValueError("decay_a must lie in [0, 1) for the kernel mass to converge")
        if self.scale_b < 0:
            raise ValueError("scale_b must be non-negative")

    @property
    def cfr(self) -> float:
        """Kernel mass b/(1-a): the fraction of cases that end in death."""
        return self.scale_b / (1.0 - self.decay_a)

    def kernel_weights(self, horizon: int) -> np.ndarray:
        """First horizon kernel weights w(0..horizon-1)."""
        w = np.zeros(horizon)
        i = np.arange(self.delay_k, horizon)
        w[i] = self.scale_b * self.decay_a ** (i - self.delay_k)
        return w


def cfr_from_params(a: float, b: float) -> float:
    if not 0.0 <= a < 1.0:
        raise ValueError("a must lie in [0, 1) for the kernel mass to converge")
    if b < 0:
        raise ValueError("b must be non-negative")
    return b / (1.0 - a)


def _delayed(values: np.ndarray, k: int) -> np.ndarray:
    if k == 0:
        return values
    out = np.zeros_like(values)
    out[k:] = values[:-k]
    return out


def _state(values: np.ndarray, a: float, k: int) -> np.ndarray:
    # s(t) = a*s(t-1) + n(t-k), zero state before the first datum
    return lfilter([1.0], [1.0, -a], _delayed(values, k))


def predict_deaths(model: CfrModel, new_cases: DailySeries) -> DailySeries:
    """Daily deaths implied by a new-case series under the kernel.

    The recursion starts from zero state, so nothing before the first datum
    contributes.  A series shorter than the delay yields an empty prediction.
    """
    if len(new_cases) < model.delay_k:
        return DailySeries(new_cases.start_date, np.zeros(0), "daily_deaths")
    s = _state(np.asarray(new_cases.values, dtype=float), model.decay_a, model.delay_k)
    return DailySeries(new_cases.start_date, model.scale_b * s, "daily_deaths")


def _best_scale(state: np.ndarray, deaths: np.ndarray):
    # least-squares b >= 0 for fixed state; returns (b, sse)
    denom = float(np.dot(state, state))
    if denom == 0.0:
        return 0.0, float(np.dot(deaths, deaths))
    b = float(np.dot(deaths, state)) / denom
    if b < 0.0:
        b = 0.0
    resid = deaths - b * state
    return b, float(np.dot(resid, resid))


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _fit_decay(cases: np.ndarray, deaths: np.ndarray, k: int,
               grid_points: int = 50, tol: float = 5e-13):
    """Best (a, b, sse) for a fixed delay.

    A coarse grid scan over (0, 1) brackets the minimum, then golden-section
    search refines it.  The grid scan is what makes the later unimodal search
    safe on real data.
    """

    def sse_at(a):
        return _best_scale(_state(cases, a, k), deaths)[1]

    grid = (np.arange(grid_points) + 0.5) / grid_points
    scores = [sse_at(a) for a in grid]
    j = int(np.argmin(scores))
    lo = 0.0 if j == 0 else grid[j - 1]
    hi = 1.0 - 1e-12 if j == grid_points - 1 else grid[j + 1]

    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1, f2 = sse_at(x1), sse_at(x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = sse_at(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = sse_at(x2)
    a = 0.5 * (lo + hi)
    b, sse = _best_scale(_state(cases, a, k), deaths)
    return a, b, sse


def _align(x: DailySeries, y: DailySeries):
    start = max(x.start_date, y.start_date)
    end = min(x.end_date, y.end_date)
    if end < start:
        raise ValueError("series date ranges do not overlap")

    def cut(s):
        i = (start - s.start_date).days
        return s.values[i:i + (end - start).days + 1]

    return start, cut(x), cut(y)


def fit(new_cases: DailySeries, deaths: DailySeries, k_range=(0, 15),
        smooth_window: int = 7) -> CfrModel:
    """Fit the delay kernel to observed daily cases and deaths.

    Both series are smoothed with a trailing moving average (smooth_window=1
    disables smoothing), aligned on their common dates, and the residual is
    minimised over (a, b) for every integer delay in k_range; the delay with
    the smallest residual wins, ties going to the smallest delay.

    Args:
        new_cases: daily new cases.
        deaths: daily deaths, overlapping the cases in date range.
        k_range: inclusive (low, high) delay interval to search.
        smooth_window: trailing moving-average length in days.

    Returns:
        CfrModel with fitted parameters, residual, percent CVs and the
        fitted death series on the aligned smoothed grid.
    """
    k_lo, k_hi = int(k_range[0]), int(k_range[1])
    if k_lo < 0 or k_hi < k_lo:
        raise ValueError("k_range must satisfy 0 <= low <= high")
    if new_cases.kind != "new_cases":
        raise ValueError("expected a new_cases series, got %s" % new_cases.kind)
    if deaths.kind != "daily_deaths":
        raise ValueError("expected a daily_deaths series, got %s" % deaths.kind)

    cases_s = moving_average(new_cases, smooth_window)
    deaths_s = moving_average(deaths, smooth_window)
    start, n, d = _align(cases_s, deaths_s)
    if len(n) < 60:
        raise ValueError("need at least 60 aligned points after smoothing, have %d" % len(n))
    if k_hi >= len(n):
        raise ValueError("k_range upper end %d reaches past the %d available points" % (k_hi, len(n)))
    if not np.any(n != 0.0):
        raise ValueError("case series is identically zero")

    if not np.any(d != 0.0):
        # no deaths at all: b = 0 fits every delay equally well
        model = CfrModel(k_lo, 0.0, 0.0, sse=0.0, cv_a=None, cv_b=None,
                         fitted_deaths=DailySeries(start, np.zeros(len(d)), "daily_deaths"))
        return model

    best = None
    for k in range(k_lo, k_hi + 1):
        a, b, sse = _fit_decay(n, d, k)
        if best is None or sse < best[3] * (1.0 - 1e-12):
            best = (k, a, b, sse)
    k, a, b, sse = best
    cv_a, cv_b = parameter_cvs(n, d, k, a, b)
    fitted = DailySeries(start, b * _state(n, a, k), "daily_deaths")
    return CfrModel(k, a, b, sse=sse, cv_a=cv_a, cv_b=cv_b, fitted_deaths=fitted)


def parameter_cvs(cases: np.ndarray, deaths: np.ndarray, k: int, a: float, b: float):
    """Percent coefficients of variation of (a, b) at a fitted optimum.

    Linearises the prediction around the optimum: the Jacobian columns are
    b * ds/da and s, the residual variance is sse/(T - 2), and the covariance
    is variance * inverse Gram.  Returns (None, None) when the Gram matrix is
    singular or there are no spare degrees of freedom, and a None cv for a
    parameter sitting at zero.
    """
    cases = np.asarray(cases, dtype=float)
    deaths = np.asarray(deaths, dtype=float)
    t = len(cases)
    if t - 2 <= 0:
        return None, None
    s = _state(cases, a, k)
    s_prev = np.zeros_like(s)
    s_prev[1:] = s[:-1]
    ds_da = lfilter([1.0], [1.0, -a], s_prev)
    col_a = b * ds_da
    col_b = s
    g11 = float(np.dot(col_a, col_a))
    g12 = float(np.dot(col_a, col_b))
    g22 = float(np.dot(col_b, col_b))
    det = g11 * g22 - g12 * g12
    scale = max(g11 * g22, 1e-300)
    if det <= 1e-14 * scale:
        return None, None
    resid = deaths - b * s
    sigma2 = float(np.dot(resid, resid)) / (t - 2)
    var_a = sigma2 * g22 / det
    var_b = sigma2 * g11 / det
    cv_a = None if a == 0.0 else 100.0 * math.sqrt(max(var_a, 0.0)) / abs(a)
    cv_b = None if b == 0.0 else 100.0 * math.sqrt(max(var_b, 0.0)) / abs(b)
    return cv_a, cv_b
