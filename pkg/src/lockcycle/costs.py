"""Outbreak-size cost accounting for periodic control strategies.

The cost of a strategy over one period is the area under its active-case
curve (person-days).  For a balanced cycle this area has closed forms in the
net rates alpha (open-phase growth) and beta (close-phase decay), and the
open-first to close-first cost ratio collapses to the peak-to-start ratio
exp(alpha*t_open).  For balanced cycles the total of new cases over the
period is gamma times the same area.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Trajectory
from .series import DailySeries

__all__ = [
    "CostReport",
    "cost_oc",
    "cost_co",
    "cost_const",
    "cost_ratio",
    "auc_numeric",
    "auc_trapezoid",
    "new_cases_over_window",
]


@dataclass(frozen=True)
class CostReport:
    """Per-strategy cost summary over one period.

    auc_active is in person-days.  total_new_cases is gamma*auc_active and is
    only filled in when gamma was supplied (it presumes a balanced cycle).
    cost_ratio_vs_co is only set on open-first reports.  The generating
    parameters are kept so ratio checks can reject mismatched comparisons.
    """

    strategy_tag: str
    auc_active: float
    i_max: float
    alpha: float | None
    beta: float | None
    i0: float
    period: float
    total_new_cases: float | None = None
    cost_ratio_vs_co: float | None = None


def _check_rates(alpha: float, beta: float, i0: float, period: float) -> None:
    if not (alpha > 0 and beta > 0):
        raise ValueError("alpha and beta must be positive")
    if not i0 > 0:
        raise ValueError("i0 must be positive")
    if not period > 0:
        raise ValueError("period must be positive")


def _open_exponent(alpha: float, beta: float, period: float) -> float:
    # alpha * t_open for the balanced split t_open = beta*period/(alpha+beta)
    return alpha * (beta * period / (alpha + beta))


def cost_oc(alpha: float, beta: float, i0: float, period: float,
            gamma: float | None = None) -> CostReport:
    """Cost of the open-first cycle: grow to the peak, then decay back to i0."""
    _check_rates(alpha, beta, i0, period)
    x = _open_exponent(alpha, beta, period)
    auc = (1.0 / beta + 1.0 / alpha) * math.expm1(x) * i0
    return CostReport(
        strategy_tag="OC",
        auc_active=auc,
        i_max=i0 * math.exp(x),
        alpha=alpha, beta=beta, i0=i0, period=period,
        total_new_cases=None if gamma is None else gamma * auc,
        cost_ratio_vs_co=math.exp(x),
    )


def cost_co(alpha: float, beta: float, i0: float, period: float,
            gamma: float | None = None) -> CostReport:
    """Cost of the close-first cycle: decay to the trough, then grow back to i0.

    The curve never exceeds its starting value, so i_max = i0 at t = 0.
    """
    _check_rates(alpha, beta, i0, period)
    x = _open_exponent(alpha, beta, period)
    auc = (1.0 / beta + 1.0 / alpha) * (-math.expm1(-x)) * i0
    return CostReport(
        strategy_tag="CO",
        auc_active=auc,
        i_max=i0,
        alpha=alpha, beta=beta, i0=i0, period=period,
        total_new_cases=None if gamma is None else gamma * auc,
    )


def cost_const(i0: float, period: float, gamma: float | None = None) -> CostReport:
    """Cost of holding the active count flat at i0 for the whole period."""
    if not i0 > 0:
        raise ValueError("i0 must be positive")
    if not period > 0:
        raise ValueError("period must be positive")
    auc = i0 * period
    return CostReport(
        strategy_tag="CONST",
        auc_active=auc,
        i_max=i0,
        alpha=None, beta=None, i0=i0, period=period,
        total_new_cases=None if gamma is None else gamma * auc,
    )


def cost_ratio(oc: CostReport, co: CostReport) -> float:
    """Open-first over close-first cost ratio for a shared parameter set.

    Recomputes the closed form exp(alpha*t_open) = i_max/i0 independently and
    refuses to return a ratio that disagrees with it.
    """
    if oc.strategy_tag != "OC" or co.strategy_tag != "CO":
        raise ValueError("cost_ratio expects an OC report and a CO report, in that order")
    if (oc.alpha, oc.beta, oc.i0, oc.period) != (co.alpha, co.beta, co.i0, co.period):
        raise ValueError("reports were computed from different parameters; "
                         "OC has (alpha=%r, beta=%r, i0=%r, period=%r), CO has "
                         "(alpha=%r, beta=%r, i0=%r, period=%r)"
                         % (oc.alpha, oc.beta, oc.i0, oc.period,
                            co.alpha, co.beta, co.i0, co.period))
    ratio = oc.auc_active / co.auc_active
    reference = math.exp(_open_exponent(oc.alpha, oc.beta, oc.period))
    if not math.isclose(ratio, reference, rel_tol=1e-9):
        raise ArithmeticError("cost ratio %.17g disagrees with exp(alpha*t_open) = %.17g"
                              % (ratio, reference))
    if not math.isclose(ratio, oc.i_max / oc.i0, rel_tol=1e-9):
        raise ArithmeticError("cost ratio disagrees with the peak-to-start ratio")
    return ratio


def auc_trapezoid(times, values) -> float:
    """Trapezoidal area for empirical samples (half-weight endpoints)."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.shape != values.shape or times.ndim != 1:
        raise ValueError("times and values must be matching one-dimensional arrays")
    if len(times) < 2:
        raise ValueError("need at least two samples")
    return float(np.trapezoid(values, times))


def auc_numeric(traj) -> float:
    """Area under an active-case curve.

    Solved trajectories integrate each exponential arc exactly:
    (I_end - I_start)/rate per segment, or I*duration where the rate is zero.
    Empirical inputs (a DailySeries or a (times, values) pair) fall back to
    the trapezoid rule.
    """
    if isinstance(traj, Trajectory):
        parts = []
        for seg in traj.segments:
            if seg.rate == 0.0:
                parts.append(seg.start_value * seg.duration)
            else:
                parts.append((seg.end_value - seg.start_value) / seg.rate)
        return math.fsum(parts)
    if isinstance(traj, DailySeries):
        return auc_trapezoid(np.arange(len(traj), dtype=float), traj.values)
    times, values = traj
    return auc_trapezoid(times, values)


def _endpoints(traj):
    # (first value, last value, horizon length in days)
    if isinstance(traj, Trajectory):
        t_end, i_end = traj.phase_boundaries[-1]
        return traj.phase_boundaries[0][1], i_end, t_end
    if isinstance(traj, DailySeries):
        if len(traj) < 2:
            raise ValueError("need at least two samples")
        return float(traj.values[0]), float(traj.values[-1]), float(len(traj) - 1)
    times, values = traj
    return float(values[0]), float(values[-1]), float(times[-1] - times[0])


def new_cases_over_window(traj, gamma: float, periodic: bool = False) -> float:
    """Total new cases implied by an active-case curve over its window.

    With the balance equation dI/dt = -gamma*I + n(t), the new-case total
    over a window equals gamma times the area under the zero-initial-condition
    response a(t) = I(t) - I(0)*exp(-gamma*t), plus the terminal mass a(T).
    When the window is one balanced period (I(T) = I(0)) this collapses to
    gamma * AUC, which the periodic flag requests directly.
    """
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    auc = auc_numeric(traj)
    if periodic:
        return gamma * auc
    i_start, i_end, horizon = _endpoints(traj)
    decay = math.exp(-gamma * horizon)
    a_end = i_end - i_start * decay
    auc_a = auc - i_start * (-math.expm1(-gamma * horizon)) / gamma
    return gamma * auc_a + a_end
