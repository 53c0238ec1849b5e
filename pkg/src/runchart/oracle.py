"""Exhaustive ground truth: enumerate every arrangement of m ones in n slots.

Everything here evaluates statistics directly on explicit bit lists, on
purpose: no automata, no propagation, no shared code with the engine it is
used to check.  Instances are limited by an enumeration budget on C(n, m).
"""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from math import comb

from .errors import BudgetExceededError, ParameterError
from .families import LongestRunStatistic, ScanStatistic, StatisticFamily

DEFAULT_BUDGET = 10**6


def longest_run_of(bits) -> int:
    """Longest streak of ones, by direct scan."""
    best = run = 0
    for b in bits:
        run = run + 1 if b else 0
        if run > best:
            best = run
    return best


def scan_max_of(bits, window: int) -> int:
    """Max ones in any `window` consecutive positions (windows truncate early)."""
    best = cur = 0
    for j, b in enumerate(bits):
        cur += b
        if j >= window:
            cur -= bits[j - window]
        if cur > best:
            best = cur
    return best


def evaluate(family: StatisticFamily, bits) -> int:
    if isinstance(family, LongestRunStatistic):
        return longest_run_of(bits)
    if isinstance(family, ScanStatistic):
        return scan_max_of(bits, family.window)
    raise ParameterError(f"unknown statistic family: {family!r}")


def arrangements(n: int, m: int, budget: int = DEFAULT_BUDGET):
    """Yield every 0/1 list of length n with exactly m ones."""
    if n < 0 or m < 0 or m > n:
        raise ParameterError(f"need 0 <= m <= n, got (n={n}, m={m})")
    total = comb(n, m)
    if total > budget:
        raise BudgetExceededError(
            f"C({n}, {m}) = {total} arrangements exceed the budget of {budget}"
        )
    for positions in itertools.combinations(range(n), m):
        bits = [0] * n
        for i in positions:
            bits[i] = 1
        yield bits


def stat_histogram(n: int, m: int, family: StatisticFamily,
                   budget: int = DEFAULT_BUDGET) -> Counter:
    """Counts of the statistic's value over all arrangements."""
    hist = Counter()
    for bits in arrangements(n, m, budget):
        hist[evaluate(family, bits)] += 1
    return hist


def joint_histogram(n: int, m: int, family: StatisticFamily,
                    budget: int = DEFAULT_BUDGET) -> Counter:
    """Counts of (value at n, value at n-1) pairs over all arrangements."""
    if n < 1:
        raise ParameterError("joint histogram needs n >= 1")
    hist = Counter()
    for bits in arrangements(n, m, budget):
        hist[(evaluate(family, bits), evaluate(family, bits[:-1]))] += 1
    return hist


def enumerate_conditional(n: int, m: int, family: StatisticFamily, threshold: int,
                          budget: int = DEFAULT_BUDGET) -> Fraction:
    """P(stat < threshold | exactly m ones among n trials), exactly."""
    hist = stat_histogram(n, m, family, budget)
    below = sum(count for value, count in hist.items() if value < threshold)
    return Fraction(below, comb(n, m))


def enumerate_joint(n: int, m: int, family: StatisticFamily, a: int, b: int,
                    budget: int = DEFAULT_BUDGET) -> Fraction:
    """P(stat_n = a, stat_{n-1} = b | N_n = m), exactly."""
    hist = joint_histogram(n, m, family, budget)
    return Fraction(hist.get((a, b), 0), comb(n, m))
