"""One-sided distribution-free control charts with data-dependent limits.

The monitor binarizes observations at a fixed cutoff, tracks a runs statistic
(longest run or windowed scan) of the resulting 0/1 stream, and recomputes the
control limit at every step so that the conditional probability of a signal at
time n, given no signal at n-1 and the current total count, is held at a target
level alpha.  Because those conditional probabilities are permutation
probabilities given the count, the in-control behaviour does not depend on the
observations' distribution.

The runs statistic is nondecreasing and grows by at most one per observation,
so the limit likewise stays or grows by one, and every joint probability the
level equation needs reduces to current and lifted survival values.  Limits are
kept in the randomized-test convention: a signal fires when the statistic
exceeds the limit, and with probability `rand_prob` when it sits exactly on the
limit.  With randomization off the same limit logic yields the conservative
chart (attained level at most alpha).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .engine import SurvivalComputer
from .errors import (
    ChartUsageError,
    DataInputError,
    DegenerateConditioningError,
    ParameterError,
)
from .families import StatisticFamily, family_for

Number = Fraction | float


def _alpha_fraction(alpha) -> Fraction:
    if isinstance(alpha, Fraction):
        return alpha
    if isinstance(alpha, str):
        return Fraction(alpha)
    if isinstance(alpha, float):
        # decimal-literal semantics: 0.1 means 1/10, not its binary expansion
        return Fraction(str(alpha))
    raise ParameterError(f"cannot interpret alpha={alpha!r}")


@dataclass(frozen=True)
class ChartConfig:
    """Settings for one chart.

    rule:        "longest-run" or "scan" (scan needs `window`)
    alpha:       target conditional signal probability; str/Fraction accepted
                 for exact mode ("0.05" and 0.05 both mean 1/20)
    threshold_c: binarization cutoff, same units as the observations
    startup_nu:  first monitored time index; earlier observations only accumulate
    randomize:   solve the boundary-randomization weight for an exact level;
                 False gives the conservative chart
    mode:        "float" (fast kernels) or "exact" (rational arithmetic)
    """

    rule: str = "longest-run"
    alpha: float | str | Fraction = 0.005
    threshold_c: float = 0.0
    window: int | None = None
    startup_nu: int = 10
    randomize: bool = True
    seed: int | None = None
    mode: str = "float"

    def __post_init__(self):
        a = _alpha_fraction(self.alpha)
        if not 0 < a < 1:
            raise ParameterError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.startup_nu < 1:
            raise ParameterError(f"startup_nu must be >= 1, got {self.startup_nu}")
        if self.mode not in ("float", "exact"):
            raise ParameterError(f"unknown mode {self.mode!r}")
        family_for(self.rule, self.window)  # validates rule/window pairing

    def alpha_value(self) -> Number:
        a = _alpha_fraction(self.alpha)
        return a if self.mode == "exact" else float(a)

    def family(self) -> StatisticFamily:
        return family_for(self.rule, self.window)


def binarize(y: float, c: float) -> int:
    """1 when the observation is at or above the cutoff, else 0."""
    if not math.isfinite(y):
        raise DataInputError(f"observation is not finite: {y!r}")
    return 1 if y >= c else 0


def conditional_no_signal_probability(
    n: int, m: int, limit_n: int, limit_prev: int, computer: SurvivalComputer
) -> Number:
    """P(stat_n < limit_n | stat_{n-1} < limit_prev, N_n = m).

    Limits here are strictly-below bounds.  When the limit grows the event is
    certain; otherwise it is the ratio of the current survival at limit_n to
    the lifted previous-step survival at limit_prev.
    """
    one = Fraction(1) if computer.mode == "exact" else 1.0
    if limit_n > limit_prev:
        return one
    num = computer.survival(n, m, limit_n)
    den = computer.lifted(n, m, limit_prev)
    if den == 0:
        raise DegenerateConditioningError(
            f"no-signal event at n-1 has probability 0 given N_{n} = {m}"
        )
    return num / den


def _level_components(n, m, k_prev, nu_prev, k_n, computer):
    """(A, B, D) with signal level (A + nu_n * B) / D, all given N_n = m.

    D is the probability of acceptance at n-1 (stat below the previous limit,
    or on it and surviving that step's coin); A is the hard signal mass with
    the statistic strictly above k_n within acceptance; B is the boundary mass
    with the statistic exactly at k_n within acceptance.
    """
    keep = 1 - nu_prev
    lift_k = computer.lifted(n, m, k_prev)
    lift_k1 = computer.lifted(n, m, k_prev + 1)
    d = lift_k + keep * (lift_k1 - lift_k)
    if k_n == k_prev:
        cur_k = computer.survival(n, m, k_prev)
        cur_k1 = computer.survival(n, m, k_prev + 1)
        a = keep * (lift_k1 - cur_k1)
        b = (lift_k - cur_k) + keep * (cur_k1 - lift_k)
    elif k_n == k_prev + 1:
        cur_k1 = computer.survival(n, m, k_prev + 1)
        a = 0 * d  # zero of the active arithmetic
        b = keep * (lift_k1 - cur_k1)
    else:
        raise ParameterError("the limit may only stay or grow by one per step")
    if computer.mode == "float":
        a, b, d = max(a, 0.0), max(b, 0.0), max(d, 0.0)
    return a, b, d


def randomized_signal_level(
    n: int,
    m: int,
    limit_n: int,
    rand_n: Number,
    limit_prev: int,
    rand_prev: Number,
    computer: SurvivalComputer,
) -> Number:
    """Exact conditional rejection level of the randomized test pair at time n."""
    a, b, d = _level_components(n, m, limit_prev, rand_prev, limit_n, computer)
    if d == 0:
        raise DegenerateConditioningError(
            f"acceptance at n-1 has probability 0 given N_{n} = {m}"
        )
    return (a + rand_n * b) / d


@dataclass(frozen=True)
class LimitSolution:
    """Limit and boundary-randomization weight for one monitored step.

    flag is "" for a regular step, "starved" when no weight in [0, 1] attains
    the target level (the boundary atom is too thin; the step runs at the
    conservative level recorded in `level`), and "degenerate" when the
    acceptance event itself has conditional probability 0.
    """

    limit: int
    rand_prob: Number
    level: Number | None
    flag: str = ""


def solve_limit(
    n: int,
    m: int,
    prev_limit: int | None,
    alpha: Number,
    computer: SurvivalComputer,
    prev_rand: Number = 0,
    randomize: bool = True,
) -> LimitSolution:
    """Smallest admissible limit with conditional signal probability <= alpha.

    With prev_limit None this solves the unconditional startup equation at
    time n; otherwise the candidate limits are prev_limit and prev_limit + 1.
    When randomize is set the boundary weight is chosen so the attained level
    equals alpha exactly whenever the boundary atom allows it.
    """
    zero = alpha * 0
    if prev_limit is None:
        return _solve_startup(n, m, alpha, computer, randomize)

    k = prev_limit
    a, b, d = _level_components(n, m, k, prev_rand, k, computer)
    if d == 0:
        return LimitSolution(k, zero, None, "degenerate")
    if a <= alpha * d:
        need = alpha * d - a
        if not randomize or need == 0:
            nu, flag = zero, ""
        elif b >= need:
            nu, flag = need / b, ""
        else:
            nu, flag = zero, "starved"
        return LimitSolution(k, nu, (a + nu * b) / d, flag)
    # the previous limit is too hot; one step up the hard level is zero and
    # the boundary atom equals a, so the exact weight always exists
    if randomize:
        nu = alpha * d / a
        return LimitSolution(k + 1, nu, alpha * 1, "")
    return LimitSolution(k + 1, zero, zero, "")


def _solve_startup(n, m, alpha, computer, randomize):
    zero = alpha * 0
    if m == 0:
        # no ones yet: nothing at or above any limit >= 1 can signal
        return LimitSolution(1, zero, zero, "starved")
    k = 1
    while True:
        tail = 1 - computer.survival(n, m, k + 1)  # P(stat > k | N_n = m)
        if tail <= alpha:
            break
        k += 1
    if not randomize:
        return LimitSolution(k, zero, tail, "")
    point = computer.survival(n, m, k + 1) - computer.survival(n, m, k)
    if computer.mode == "float":
        point = max(point, 0.0)
    if point == 0:
        # unreachable for m >= 1 up to rounding; fall back to the hard level
        return LimitSolution(k, zero, tail, "starved")
    # minimality of k forces a positive atom at k, and the solution lies in [0, 1)
    nu = (alpha - tail) / point
    return LimitSolution(k, nu, tail + nu * point, "")


@dataclass
class ChartState:
    """Mutable state of one monitored stream.

    Trajectories hold one entry per monitored step (from startup_nu on).  The
    survival cache backing the level equations lives on the monitor's
    SurvivalComputer, keyed by (time, count, threshold).
    """

    t: int = 0
    count: int = 0
    stat: int = 0
    alarmed: bool = False
    signal_kind: str | None = None
    limits: list[int] = field(default_factory=list)
    rand_probs: list = field(default_factory=list)
    levels: list = field(default_factory=list)
    flags: list[str] = field(default_factory=list)
    stat_path: list[int] = field(default_factory=list)


@dataclass(frozen=True)
class StepRecord:
    """What one observation did to the chart."""

    t: int
    y: float
    bit: int
    count: int
    stat: int
    limit: int | None
    rand_prob: Number | None
    level: Number | None
    signal: bool
    signal_kind: str | None
    flag: str

    def to_json_dict(self) -> dict:
        return {
            "t": self.t,
            "y": self.y,
            "bit": self.bit,
            "count": self.count,
            "stat": self.stat,
            "limit": self.limit,
            "nu": None if self.rand_prob is None else float(self.rand_prob),
            "signal": self.signal,
        }


@dataclass(frozen=True)
class RunLengthRecord:
    """Outcome of monitoring one sequence.

    `signal_time` is the absolute 1-based observation index; `rl` counts
    monitored steps (signal_time - startup_nu + 1), the scale on which the
    in-control run length is geometric.  Censored records have both None.
    """

    signal_time: int | None
    rl: int | None
    censored: bool
    observed: int
    signal_kind: str | None
    startup_nu: int
    limits: tuple[int, ...]
    stats: tuple[int, ...]
    rand_probs: tuple
    flags: tuple[str, ...]

    def to_json_dict(self) -> dict:
        return {
            "signal_time": self.signal_time,
            "rl": self.rl,
            "censored": self.censored,
            "observed": self.observed,
            "signal_kind": self.signal_kind,
            "startup_nu": self.startup_nu,
            "limits": list(self.limits),
            "stats": list(self.stats),
            "nus": [float(v) for v in self.rand_probs],
        }


class Monitor:
    """Sequential chart over one observation stream.

    A monitor is single-owner and strictly ordered; run a second stream with a
    second monitor.  A SurvivalComputer may be shared across monitors of the
    same family and mode (simulations rely on this) under single-threaded use.
    """

    def __init__(
        self,
        config: ChartConfig,
        computer: SurvivalComputer | None = None,
        rng=None,
    ):
        self.config = config
        self.family = config.family()
        if computer is None:
            computer = SurvivalComputer(self.family, config.mode)
        elif computer.mode != config.mode:
            raise ParameterError(
                f"computer mode {computer.mode!r} does not match chart mode {config.mode!r}"
            )
        self.computer = computer
        self._alpha = config.alpha_value()
        self._rng = rng if rng is not None else random.Random(config.seed)
        self._tracker = self.family.tracker()
        self.state = ChartState()

    def update(self, y: float) -> StepRecord:
        """Feed one observation; raises ChartUsageError after a signal."""
        if self.state.alarmed:
            raise ChartUsageError("monitor already signalled; start a new chart")
        return self._advance(float(y), binarize(y, self.config.threshold_c))

    def update_bit(self, bit: int) -> StepRecord:
        """Feed an already-binarized value (used for raw 0/1 streams)."""
        if self.state.alarmed:
            raise ChartUsageError("monitor already signalled; start a new chart")
        if bit not in (0, 1):
            raise DataInputError(f"bit must be 0 or 1, got {bit!r}")
        return self._advance(float(bit), bit)

    def _advance(self, y: float, bit: int) -> StepRecord:
        st = self.state
        st.t += 1
        st.count += bit
        st.stat = self._tracker.push(bit)
        n, m = st.t, st.count
        if n < self.config.startup_nu:
            return StepRecord(n, y, bit, m, st.stat, None, None, None, False, None, "startup")

        if n == self.config.startup_nu:
            sol = solve_limit(n, m, None, self._alpha, self.computer,
                              randomize=self.config.randomize)
        else:
            sol = solve_limit(n, m, st.limits[-1], self._alpha, self.computer,
                              prev_rand=st.rand_probs[-1],
                              randomize=self.config.randomize)
        st.limits.append(sol.limit)
        st.rand_probs.append(sol.rand_prob)
        st.levels.append(sol.level)
        st.flags.append(sol.flag)
        st.stat_path.append(st.stat)

        signal, kind = False, None
        if st.stat > sol.limit:
            signal, kind = True, "exceed"
        elif st.stat == sol.limit and self.config.randomize and sol.rand_prob > 0:
            if self._rng.random() < sol.rand_prob:
                signal, kind = True, "randomized"
        if signal:
            st.alarmed = True
            st.signal_kind = kind
        return StepRecord(n, y, bit, m, st.stat, sol.limit, sol.rand_prob,
                          sol.level, signal, kind, sol.flag)

    def record(self) -> RunLengthRecord:
        """Run-length record for the stream consumed so far."""
        st = self.state
        nu = self.config.startup_nu
        if st.alarmed:
            return RunLengthRecord(st.t, st.t - nu + 1, False, st.t, st.signal_kind,
                                   nu, tuple(st.limits), tuple(st.stat_path),
                                   tuple(st.rand_probs), tuple(st.flags))
        return RunLengthRecord(None, None, True, st.t, None, nu, tuple(st.limits),
                               tuple(st.stat_path), tuple(st.rand_probs), tuple(st.flags))

    def run(self, observations) -> RunLengthRecord:
        """Fold the monitor over a sequence, stopping at the first signal."""
        for y in observations:
            if self.update(y).signal:
                break
        return self.record()


def run_length(observations, config: ChartConfig,
               computer: SurvivalComputer | None = None, rng=None) -> RunLengthRecord:
    """Monitor a whole sequence and return its run-length record."""
    return Monitor(config, computer=computer, rng=rng).run(observations)
