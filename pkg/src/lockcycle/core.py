"""Piecewise-exponential active-case dynamics under periodic open/close control.

A single infected stock I(t) evolves as dI/dt = gamma*(R_t - 1)*I with a
piecewise-constant reproduction number R_t, so every control phase is a pure
exponential arc and phase-boundary values have closed forms.  A cycle that
alternates an open phase (R_t = r_open > 1) with a close phase
(R_t = r_close < 1) returns I(t) to its starting value exactly when R_t
averages to one over the cycle; phase_lengths computes the unique split of a
given period that achieves this balance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DEFAULT_GAMMA",
    "OC",
    "CO",
    "CUSTOM",
    "StrategyParams",
    "Phase",
    "PhaseSchedule",
    "Segment",
    "Trajectory",
    "phase_lengths",
    "average_rt",
    "solve_trajectory",
    "swap_cycle",
]

#: Fallback removal rate (1/day) when a strategy is stated in net-rate form
#: without an explicit gamma; corresponds to a 14-day infectious period.
DEFAULT_GAMMA = 1.0 / 14.0

# Cycle order tags.  OC opens first and closes second, CO is the reverse,
# CUSTOM is any other phase sequence.
OC = "OC"
CO = "CO"
CUSTOM = "CUSTOM"


@dataclass(frozen=True)
class StrategyParams:
    """Parameters of a two-phase periodic control strategy.

    Two equivalent parameterisations are supported: reproduction numbers
    (gamma, r_open, r_close) or net exponential rates
    (alpha = gamma*(r_open - 1) for growth, beta = gamma*(1 - r_close) for
    decay).  Build instances through the classmethods; each keeps the pair
    it was given exact and derives the other, so downstream closed forms
    see the caller's numbers unchanged.
    """

    gamma: float
    r_open: float
    r_close: float
    i0: float
    period: float
    alpha: float
    beta: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if not self.r_open > 1:
            raise ValueError("r_open must exceed 1, otherwise there is no growth phase")
        if self.r_close < 0:
            raise ValueError("r_close must be non-negative")
        if not self.r_close < 1:
            raise ValueError("r_close must be below 1, otherwise there is no decay phase")
        if not self.i0 > 0:
            raise ValueError("i0 must be positive")
        if not self.period > 0:
            raise ValueError("period must be positive")
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("net rates alpha and beta must be positive")

    @classmethod
    def from_reproduction_numbers(cls, gamma: float, r_open: float, r_close: float,
                                  i0: float, period: float) -> "StrategyParams":
        return cls(
            gamma=gamma,
            r_open=r_open,
            r_close=r_close,
            i0=i0,
            period=period,
            alpha=gamma * (r_open - 1.0),
            beta=gamma * (1.0 - r_close),
        )

    @classmethod
    def from_growth_rates(cls, alpha: float, beta: float, i0: float, period: float,
                          gamma: float = DEFAULT_GAMMA) -> "StrategyParams":
        """Build from net growth/decay rates (1/day).

        Requires beta <= gamma: a decay rate faster than removal would need a
        negative reproduction number during the close phase.
        """
        if not gamma > 0:
            raise ValueError("gamma must be positive")
        if not (alpha > 0 and beta > 0):
            raise ValueError("alpha and beta must be positive")
        if beta > gamma:
            raise ValueError(
                "beta=%g exceeds gamma=%g which would imply a negative "
                "close-phase reproduction number; pass a larger gamma" % (beta, gamma)
            )
        return cls(
            gamma=gamma,
            r_open=1.0 + alpha / gamma,
            r_close=1.0 - beta / gamma,
            i0=i0,
            period=period,
            alpha=alpha,
            beta=beta,
        )


@dataclass(frozen=True)
class Phase:
    """One control phase: a reproduction number held for a duration (days)."""

    rt: float
    duration: float

    def __post_init__(self):
        if not self.duration > 0:
            raise ValueError("phase duration must be positive")
        if self.rt < 0:
            raise ValueError("reproduction number must be non-negative")


@dataclass(frozen=True)
class PhaseSchedule:
    """An ordered sequence of phases making up one control cycle.

    order_tag is OC (open first), CO (close first) or CUSTOM.  The tagged
    two-phase forms are validated structurally; CUSTOM accepts any number of
    phases and any non-negative reproduction numbers.
    """

    phases: tuple
    order_tag: str = CUSTOM

    def __post_init__(self):
        phases = tuple(p if isinstance(p, Phase) else Phase(*p) for p in self.phases)
        object.__setattr__(self, "phases", phases)
        if not phases:
            raise ValueError("schedule needs at least one phase")
        if self.order_tag not in (OC, CO, CUSTOM):
            raise ValueError("order_tag must be one of OC, CO, CUSTOM")
        if self.order_tag in (OC, CO):
            if len(phases) != 2:
                raise ValueError("%s schedules have exactly two phases" % self.order_tag)
            growth, decay = (phases if self.order_tag == OC else phases[::-1])
            if not growth.rt > 1:
                raise ValueError("the open phase needs rt > 1")
            if not decay.rt < 1:
                raise ValueError("the close phase needs rt < 1")

    @property
    def period(self) -> float:
        return math.fsum(p.duration for p in self.phases)

    @classmethod
    def open_close(cls, params: StrategyParams) -> "PhaseSchedule":
        t_open, t_close = phase_lengths(params)
        return cls((Phase(params.r_open, t_open), Phase(params.r_close, t_close)), OC)

    @classmethod
    def close_open(cls, params: StrategyParams) -> "PhaseSchedule":
        t_open, t_close = phase_lengths(params)
        return cls((Phase(params.r_close, t_close), Phase(params.r_open, t_open)), CO)


@dataclass(frozen=True)
class Segment:
    """One exponential arc of a solved trajectory."""

    start_time: float
    duration: float
    rate: float        # net rate gamma*(rt - 1), 1/day
    start_value: float
    rt: float

    @property
    def end_time(self) -> float:
        return self.start_time + self.duration

    @property
    def end_value(self) -> float:
        return self.start_value * math.exp(self.rate * self.duration)


@dataclass(frozen=True)
class Trajectory:
    """Sampled active-case curve plus the exact per-phase structure.

    times/active are the sampled grid.  phase_boundaries holds the exact
    (time, value) pairs at phase edges computed by sequential closed-form
    products, so downstream integrals and invariant checks do not depend on
    the sampling step.  Arrays are frozen after construction.
    """

    times: np.ndarray
    active: np.ndarray
    phase_boundaries: tuple
    segments: tuple

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        active = np.asarray(self.active, dtype=float)
        times.flags.writeable = False
        active.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "active", active)


def phase_lengths(params: StrategyParams):
    """Split params.period into (t_open, t_close) so the cycle is balanced.

    The balance condition is r_open*t_open + r_close*t_close = period, i.e.
    the time-averaged reproduction number over the cycle equals one.  In net
    rates this is t_open = beta*period/(alpha + beta), which also makes the
    growth and decay exponents cancel exactly: alpha*t_open = beta*t_close.
    """
    t_open = params.beta * params.period / (params.alpha + params.beta)
    return t_open, params.period - t_open


def average_rt(schedule: PhaseSchedule) -> float:
    """Duration-weighted mean reproduction number of a schedule."""
    total = math.fsum(p.duration for p in schedule.phases)
    weighted = math.fsum(p.rt * p.duration for p in schedule.phases)
    return weighted / total


def solve_trajectory(i0: float, schedule: PhaseSchedule, gamma: float,
                     sample_step: float = 1.0) -> Trajectory:
    """Solve the active-case curve for one cycle of a schedule.

    Within phase j the curve is I(t) = I_j * exp(gamma*(rt_j - 1)*(t - t_j)),
    with phase-start values chained exactly from i0.  Samples are taken every
    sample_step days starting at 0, and the cycle end is always included.
    """
    if not i0 > 0:
        raise ValueError("i0 must be positive")
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    if not sample_step > 0:
        raise ValueError("sample_step must be positive")

    segments = []
    boundaries = [(0.0, float(i0))]
    t, val = 0.0, float(i0)
    for ph in schedule.phases:
        rate = gamma * (ph.rt - 1.0)
        segments.append(Segment(t, ph.duration, rate, val, ph.rt))
        t = t + ph.duration
        val = val * math.exp(rate * ph.duration)
        boundaries.append((t, val))
    total = t

    n_steps = int(math.floor(total / sample_step + 1e-9))
    times = np.arange(n_steps + 1, dtype=float) * sample_step
    if total - times[-1] > 1e-9 * max(1.0, total):
        times = np.append(times, total)
    else:
        times[-1] = total  # snap fp drift so the last sample sits on the cycle end

    starts = np.array([s.start_time for s in segments])
    rates = np.array([s.rate for s in segments])
    values = np.array([s.start_value for s in segments])
    idx = np.clip(np.searchsorted(starts, times, side="right") - 1, 0, len(segments) - 1)
    active = values[idx] * np.exp(rates[idx] * (times - starts[idx]))

    return Trajectory(times, active, tuple(boundaries), tuple(segments))


def swap_cycle(schedule: PhaseSchedule) -> PhaseSchedule:
    """Reverse the phase order of a two-phase cycle, swapping OC and CO tags."""
    if len(schedule.phases) != 2:
        raise ValueError("swap_cycle is defined for two-phase cycles only")
    tag = {OC: CO, CO: OC}.get(schedule.order_tag, CUSTOM)
    return PhaseSchedule((schedule.phases[1], schedule.phases[0]), tag)
