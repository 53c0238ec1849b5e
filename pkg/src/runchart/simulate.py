"""Monte Carlo run-length estimation under a change-point stream model.

A scenario draws an optional block of in-control historical observations,
then feeds the chart a stream that switches from the in-control to the
out-of-control generator at the change point.  Replications use spawned
substreams of one seed sequence, so estimates are reproducible bit for bit
and independent of any parallel schedule.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy import stats as sps

from .chart import ChartConfig, Monitor
from .engine import SurvivalComputer
from .errors import ParameterError
from .families import family_for

_CHUNK = 64


@dataclass(frozen=True)
class Distribution:
    """Named observation generator with positional parameters."""

    kind: str
    args: tuple[float, ...]

    def frozen(self):
        return _frozen(self.kind, self.args)

    def sample(self, rng, size: int):
        return self.frozen().rvs(size=size, random_state=rng)

    def ppf(self, q: float) -> float:
        return float(self.frozen().ppf(q))

    def shifted(self, delta: float) -> "Distribution":
        """Same shape, location moved by delta (normal and student-t only)."""
        if self.kind == "normal":
            mu, sigma = self.args
            return Distribution("normal", (mu + delta, sigma))
        if self.kind == "student-t":
            df, loc = self.args
            return Distribution("student-t", (df, loc + delta))
        raise ParameterError(f"no location shift defined for {self.kind!r}")


@lru_cache(maxsize=None)
def _frozen(kind: str, args: tuple[float, ...]):
    if kind == "normal":
        mu, sigma = args
        return sps.norm(mu, sigma)
    if kind == "student-t":
        df, loc = args
        return sps.t(df, loc=loc)
    if kind == "exponential":
        (rate,) = args
        return sps.expon(scale=1.0 / rate)
    if kind == "uniform":
        low, high = args
        return sps.uniform(low, high - low)
    raise ParameterError(f"unknown distribution kind {kind!r}")


def normal(mean: float = 0.0, sigma: float = 1.0) -> Distribution:
    return Distribution("normal", (float(mean), float(sigma)))


def student_t(df: float, loc: float = 0.0) -> Distribution:
    return Distribution("student-t", (float(df), float(loc)))


def exponential(rate: float = 1.0) -> Distribution:
    return Distribution("exponential", (float(rate),))


def uniform(low: float = 0.0, high: float = 1.0) -> Distribution:
    return Distribution("uniform", (float(low), float(high)))


@dataclass(frozen=True)
class ScenarioSpec:
    """One simulated monitoring setting.

    warmup in-control draws are prepended (historical data); tau indexes the
    first out-of-control observation counted after the warmup, so tau = 1
    shifts everything past the warmup.  horizon caps post-warmup observations.
    """

    dist0: Distribution
    dist1: Distribution
    tau: int = 1
    horizon: int = 10_000
    reps: int = 1000
    seed: int = 0
    warmup: int = 0

    def __post_init__(self):
        if self.reps < 1 or self.horizon < 1 or self.tau < 1 or self.warmup < 0:
            raise ParameterError("need reps >= 1, horizon >= 1, tau >= 1, warmup >= 0")


@dataclass(frozen=True)
class ArlEstimate:
    """Run lengths in monitored steps (1 = first monitored observation).

    mean averages uncensored replications only; censored_count reports how
    many replications hit the horizon unsignalled.
    """

    mean: float
    std_error: float
    censored_count: int
    rl_histogram: dict[int, int]
    reps: int

    def run_lengths(self) -> np.ndarray:
        return np.repeat(
            list(self.rl_histogram.keys()), list(self.rl_histogram.values())
        )


def _run_one(monitor: Monitor, scenario: ScenarioSpec, rng) -> int | None:
    change_at = scenario.warmup + scenario.tau  # absolute index of first shifted draw
    total = scenario.warmup + scenario.horizon
    t = 0
    while t < total:
        if t + 1 < change_at:
            size = min(_CHUNK, change_at - 1 - t, total - t)
            block = scenario.dist0.sample(rng, size)
        else:
            size = min(_CHUNK, total - t)
            block = scenario.dist1.sample(rng, size)
        for y in block:
            t += 1
            if monitor.update(float(y)).signal:
                return monitor.state.t - monitor.config.startup_nu + 1
    return None


def estimate_arl(scenario: ScenarioSpec, config: ChartConfig,
                 computer: SurvivalComputer | None = None) -> ArlEstimate:
    """Average run length over independent replications of one scenario."""
    if computer is None:
        computer = SurvivalComputer(family_for(config.rule, config.window), config.mode)
    histogram = Counter()
    censored = 0
    for child in np.random.SeedSequence(scenario.seed).spawn(scenario.reps):
        rng = np.random.default_rng(child)
        rl = _run_one(Monitor(config, computer=computer, rng=rng), scenario, rng)
        if rl is None:
            censored += 1
        else:
            histogram[rl] += 1
    rls = np.repeat(list(histogram.keys()), list(histogram.values()))
    if rls.size:
        mean = float(rls.mean())
        se = float(rls.std(ddof=1) / math.sqrt(rls.size)) if rls.size > 1 else math.nan
    else:
        mean = se = math.nan
    return ArlEstimate(mean, se, censored, dict(sorted(histogram.items())), scenario.reps)


def sweep_threshold(scenario: ScenarioSpec, config: ChartConfig, c_values,
                    computer: SurvivalComputer | None = None):
    """ARL estimate per binarization cutoff, with the survival cache shared."""
    if computer is None:
        computer = SurvivalComputer(family_for(config.rule, config.window), config.mode)
    return [
        (c, estimate_arl(scenario, replace(config, threshold_c=float(c)), computer))
        for c in c_values
    ]


@dataclass(frozen=True)
class GeometricFit:
    """Chi-square goodness of fit of in-control run lengths to geometric(alpha)."""

    chi_square: float
    df: int
    p_value: float
    alpha: float
    estimate: ArlEstimate


def geometric_check(scenario: ScenarioSpec, config: ChartConfig,
                    computer: SurvivalComputer | None = None) -> GeometricFit:
    """Fit the in-control run-length sample against geometric(alpha).

    Requires an in-control scenario (dist1 == dist0).  Expected bin counts
    below 5 are merged into the tail; censored replications land in the open
    tail bin, whose expectation is the geometric tail mass.
    """
    if scenario.dist0 != scenario.dist1:
        raise ParameterError("geometric_check needs an in-control scenario (dist1 == dist0)")
    est = estimate_arl(scenario, config, computer)
    alpha = float(config.alpha_value())
    n = est.reps
    max_rl = max(est.rl_histogram) if est.rl_histogram else 1
    expected = [n * alpha * (1 - alpha) ** (j - 1) for j in range(1, max_rl + 1)]
    observed = [est.rl_histogram.get(j, 0) for j in range(1, max_rl + 1)]
    expected.append(n * (1 - alpha) ** max_rl)  # open tail
    observed.append(est.censored_count)
    while len(expected) > 1 and expected[-1] < 5:
        expected[-2] += expected.pop()
        observed[-2] += observed.pop()
    chi2 = sum((o - e) ** 2 / e for o, e in zip(observed, expected))
    df = len(expected) - 1
    p = float(sps.chi2.sf(chi2, df)) if df > 0 else math.nan
    return GeometricFit(float(chi2), df, p, alpha, est)
