"""Exact conditional distributions of runs statistics given the total count.

Given the number of ones among n Bernoulli trials, the sequence is a uniform
random arrangement, so every probability here is a ratio of arrangement counts
and involves no success probability at all.  Distributions are computed by
propagating a forward vector over (ones-so-far, ending-block) states: at time
t, conditioned on m total ones, the next symbol is 1 with probability
(m - l)/(n - t + 1) and 0 otherwise, and the ending block follows the suffix
automaton, with occurrences absorbing the mass.

Two arithmetic modes are supported.  Exact mode propagates `fractions.Fraction`
mass (the default whenever n is at or below `EXACT_LIMIT`); float mode defers
to the compiled/NumPy kernel in `runchart._backend`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from . import _backend
from .errors import InfeasibleStateError, ParameterError
from .families import StatisticFamily
from .patterns import CompoundPattern, EndingBlockSpace, ending_blocks_for

EXACT_LIMIT = 64

Number = Fraction | float


@dataclass
class ForwardVector:
    """Probability mass over live (ones-so-far, state-index) pairs plus absorbed mass.

    Entries and the absorbed share always total 1: the vector is a full
    distribution over the imbedded chain, with the absorbing state collapsed
    to a scalar.
    """

    mass: dict[tuple[int, int], Number]
    absorbed: Number

    @classmethod
    def initial(cls, exact: bool = True) -> "ForwardVector":
        if exact:
            return cls({(0, 0): Fraction(1)}, Fraction(0))
        return cls({(0, 0): 1.0}, 0.0)

    @property
    def exact(self) -> bool:
        return isinstance(self.absorbed, Fraction)

    def live(self) -> Number:
        zero = Fraction(0) if self.exact else 0.0
        return sum(self.mass.values(), start=zero)

    def total(self) -> Number:
        return self.live() + self.absorbed


def step(v: ForwardVector, t: int, n: int, m: int, space: EndingBlockSpace) -> ForwardVector:
    """One transition of the count-conditioned chain, from time t-1 to time t."""
    if not 1 <= t <= n:
        raise ParameterError(f"time index {t} outside 1..{n}")
    denom = n - t + 1
    exact = v.exact
    zero = Fraction(0) if exact else 0.0
    mass: dict[tuple[int, int], Number] = {}
    absorbed = v.absorbed
    for (l, si), p in v.mass.items():
        if p == zero:
            continue
        if l > m or m - l > denom or l > t - 1:
            raise InfeasibleStateError(f"state with {l} ones at time {t - 1} under (n={n}, m={m})")
        w1 = Fraction(m - l, denom) if exact else (m - l) / denom
        w0 = 1 - w1
        if w1 > 0:
            d1 = space.next1[si]
            if d1 < 0:
                absorbed += p * w1
            else:
                key = (l + 1, d1)
                mass[key] = mass.get(key, zero) + p * w1
        if w0 > 0:
            d0 = space.next0[si]
            if d0 < 0:
                absorbed += p * w0
            else:
                key = (l, d0)
                mass[key] = mass.get(key, zero) + p * w0
    return ForwardVector(mass, absorbed)


def _validate_nm(n: int, m: int) -> None:
    if n < 0 or m < 0 or m > n:
        raise ParameterError(f"need 0 <= m <= n, got (n={n}, m={m})")


def survival_probability(
    n: int,
    m: int,
    cp: CompoundPattern,
    mode: str = "auto",
    exact_limit: int = EXACT_LIMIT,
) -> Number:
    """P(no pattern of `cp` occurs | exactly m ones among n trials).

    For the scan pattern set with parameters (r, s) this is
    P(scan statistic < s | count = m); for the run pattern of length d it is
    P(longest run < d | count = m).  `mode` is "exact", "float", or "auto"
    (exact up to `exact_limit` trials, float beyond).
    """
    _validate_nm(n, m)
    if mode not in ("auto", "exact", "float"):
        raise ParameterError(f"unknown mode {mode!r}")
    exact = mode == "exact" or (mode == "auto" and n <= exact_limit)
    space = ending_blocks_for(cp)
    if not exact:
        next0 = np.asarray(space.next0, dtype=np.intc)
        next1 = np.asarray(space.next1, dtype=np.intc)
        return _backend.survival(n, m, next0, next1)
    v = ForwardVector.initial(exact=True)
    for t in range(1, n + 1):
        v = step(v, t, n, m, space)
    return v.live()


def lift_to_next_count(n: int, m: int, q_m: Number | None, q_m_minus_1: Number | None) -> Number:
    """P(event | N_n = m) from the same event's probabilities given N_{n-1}.

    Mixes with the exchangeability weights P(X_n = 0 | N_n = m) = (n - m)/n and
    P(X_n = 1 | N_n = m) = m/n.  At the boundaries only the feasible branch is
    used: q_m for m = 0, q_m_minus_1 for m = n.
    """
    if n < 1:
        raise ParameterError("lift needs n >= 1")
    _validate_nm(n, m)
    if m == 0:
        return q_m
    if m == n:
        return q_m_minus_1
    if isinstance(q_m, Fraction) and isinstance(q_m_minus_1, Fraction):
        return Fraction(n - m, n) * q_m + Fraction(m, n) * q_m_minus_1
    return (n - m) / n * q_m + m / n * q_m_minus_1


class _FloatTable:
    """Per-count conditional survival for one threshold, grown row by row.

    Keeps the running state distribution for every count up to a cap and a
    table of survival values Q(t, l) for all produced times; the cap grows by
    rebuilding when a query needs a larger count.
    """

    def __init__(self, next0: np.ndarray, next1: np.ndarray):
        self._next0 = next0
        self._next1 = next1
        self._n_states = len(next0)
        self._built_t = 0
        self._l_cap = -1
        self._g = None
        self._q = None

    def query(self, n: int, m: int) -> float:
        if m > self._l_cap:
            self._l_cap = max(2 * m, m + 8)
            self._g = np.zeros((self._l_cap + 1, self._n_states))
            self._g[0, 0] = 1.0
            self._q = np.zeros((max(n, 64) + 1, self._l_cap + 1))
            self._q[0, 0] = 1.0
            self._built_t = 0
        if n > self._built_t:
            if n >= self._q.shape[0]:
                grown = np.zeros((max(n + 1, 2 * self._q.shape[0]), self._l_cap + 1))
                grown[: self._q.shape[0]] = self._q
                self._q = grown
            _backend.extend(
                self._g,
                self._q[self._built_t + 1 : n + 1],
                self._built_t + 1,
                n,
                self._next0,
                self._next1,
            )
            self._built_t = n
        return float(self._q[n, m])


class _ExactTable:
    """Integer-count analogue of _FloatTable: arrangement counts, exact queries.

    Row t holds, per (count, state), the number of length-t strings still
    avoiding the pattern; a query divides the per-count total by C(t, count).
    """

    def __init__(self, space: EndingBlockSpace):
        self._next0 = space.next0
        self._next1 = space.next1
        self._n_states = space.size
        self._f = [[1] + [0] * (self._n_states - 1)]  # row t=0, count 0 only
        self._alive = [[1]]  # alive[t][l] = survivor count

    def _grow_to(self, n: int) -> None:
        E = self._n_states
        while len(self._alive) <= n:
            t = len(self._alive)
            prev = self._f
            cur = [[0] * E for _ in range(t + 1)]
            for l in range(min(t - 1, len(prev) - 1) + 1):
                row = prev[l]
                for si in range(E):
                    c = row[si]
                    if not c:
                        continue
                    d0 = self._next0[si]
                    if d0 >= 0:
                        cur[l][d0] += c
                    d1 = self._next1[si]
                    if d1 >= 0:
                        cur[l + 1][d1] += c
            self._f = cur
            self._alive.append([sum(counts) for counts in cur])

    def query(self, n: int, m: int) -> Fraction:
        self._grow_to(n)
        return Fraction(self._alive[n][m], comb(n, m))


class SurvivalComputer:
    """Memoized survival probabilities P(stat < k | count) for one statistic family.

    One instance per monitoring session or simulation scenario; reuse across
    replications is safe (and is where the speed comes from), concurrent
    mutation is not.
    """

    def __init__(self, family: StatisticFamily, mode: str = "float"):
        if mode not in ("float", "exact"):
            raise ParameterError(f"unknown mode {mode!r}")
        self.family = family
        self.mode = mode
        self._tables: dict[int, _FloatTable | _ExactTable] = {}
        self._one = Fraction(1) if mode == "exact" else 1.0
        self._zero = Fraction(0) if mode == "exact" else 0.0

    def max_stat(self, n: int, m: int) -> int:
        return self.family.max_value(n, m)

    def survival(self, n: int, m: int, k: int) -> Number:
        """P(stat_n < k | N_n = m)."""
        _validate_nm(n, m)
        if k <= 0:
            return self._zero
        if k > self.family.max_value(n, m):
            return self._one
        table = self._tables.get(k)
        if table is None:
            if self.mode == "exact":
                table = _ExactTable(self.family.space(k))
            else:
                table = _FloatTable(*self.family.tables(k))
            self._tables[k] = table
        return table.query(n, m)

    def lifted(self, n: int, m: int, k: int) -> Number:
        """P(stat_{n-1} < k | N_n = m)."""
        if n < 1:
            raise ParameterError("lifted survival needs n >= 1")
        q_m = self.survival(n - 1, m, k) if m < n else None
        q_m1 = self.survival(n - 1, m - 1, k) if m > 0 else None
        return lift_to_next_count(n, m, q_m, q_m1)


def statistic_pmf(
    n: int,
    m: int,
    family: StatisticFamily,
    computer: SurvivalComputer | None = None,
    mode: str = "auto",
) -> dict[int, Number]:
    """Conditional pmf of the statistic given N_n = m, as {value: probability}."""
    _validate_nm(n, m)
    comp = computer or SurvivalComputer(family, _resolve_mode(mode, n))
    cap = comp.max_stat(n, m)
    pmf = {}
    for j in range(cap + 1):
        p = comp.survival(n, m, j + 1) - comp.survival(n, m, j)
        if comp.mode == "float":
            p = max(p, 0.0)
        pmf[j] = p
    return pmf


def joint_two_step(
    n: int,
    m: int,
    family: StatisticFamily,
    a: int,
    b: int,
    computer: SurvivalComputer | None = None,
    mode: str = "auto",
) -> Number:
    """P(stat_n = a, stat_{n-1} = b | N_n = m).

    The statistic is nondecreasing and grows by at most one per observation, so
    the joint is supported on b <= a <= b + 1 and reduces to differences of
    current and lifted survival values:

        P(a, a)     = P(stat_n < a+1) - P(stat_{n-1} < a)
        P(b+1, b)   = P(stat_{n-1} < b+1) - P(stat_n < b+1)
    """
    if n < 1:
        raise ParameterError("joint distribution needs n >= 1")
    _validate_nm(n, m)
    comp = computer or SurvivalComputer(family, _resolve_mode(mode, n))
    if a < 0 or b < 0 or a < b or a > b + 1:
        return comp._zero
    if a == b:
        p = comp.survival(n, m, a + 1) - comp.lifted(n, m, a)
    else:
        p = comp.lifted(n, m, a) - comp.survival(n, m, a)
    if comp.mode == "float":
        p = max(p, 0.0)
    return p


def _resolve_mode(mode: str, n: int) -> str:
    if mode == "auto":
        return "exact" if n <= EXACT_LIMIT else "float"
    if mode not in ("exact", "float"):
        raise ParameterError(f"unknown mode {mode!r}")
    return mode
