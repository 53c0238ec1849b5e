"""The two monitored runs statistics: longest run and moving-window scan.

A family bundles everything the distribution engine and the online monitor
need for one statistic: the compound pattern whose non-occurrence means
"statistic below k", the cached automata per threshold, the attainable
maximum given a count, and an incremental tracker for streaming updates.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .errors import ParameterError
from .patterns import (
    CompoundPattern,
    EndingBlockSpace,
    ending_blocks_for,
    generate_scan_compound,
    longest_run_pattern,
)


class _LongestRunTracker:
    """Streaming longest-run-of-ones; value never decreases, steps by at most 1."""

    def __init__(self):
        self.value = 0
        self._run = 0

    def push(self, bit: int) -> int:
        self._run = self._run + 1 if bit else 0
        if self._run > self.value:
            self.value = self._run
        return self.value


class _ScanTracker:
    """Streaming max ones over any `window` consecutive trials (truncated early)."""

    def __init__(self, window: int):
        self.value = 0
        self._window = window
        self._bits = deque()
        self._in_window = 0

    def push(self, bit: int) -> int:
        self._bits.append(bit)
        self._in_window += bit
        if len(self._bits) > self._window:
            self._in_window -= self._bits.popleft()
        if self._in_window > self.value:
            self.value = self._in_window
        return self.value


class LongestRunStatistic:
    """Length of the longest run of ones."""

    name = "longest-run"

    def max_value(self, n: int, m: int) -> int:
        return m

    def threshold_pattern(self, k: int) -> CompoundPattern:
        return longest_run_pattern(k)

    def space(self, k: int) -> EndingBlockSpace:
        return ending_blocks_for(self.threshold_pattern(k))

    def tables(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        return _tables(self.space(k))

    def tracker(self) -> _LongestRunTracker:
        return _LongestRunTracker()

    def describe(self) -> dict:
        return {"family": self.name}


class ScanStatistic:
    """Maximum number of ones over any `window` consecutive trials."""

    name = "scan"

    def __init__(self, window: int):
        if window < 1:
            raise ParameterError(f"scan window must be >= 1, got {window}")
        self.window = window

    def max_value(self, n: int, m: int) -> int:
        return min(m, self.window)

    def threshold_pattern(self, k: int) -> CompoundPattern:
        return generate_scan_compound(self.window, k)

    def space(self, k: int) -> EndingBlockSpace:
        return ending_blocks_for(self.threshold_pattern(k))

    def tables(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        return _tables(self.space(k))

    def tracker(self) -> _ScanTracker:
        return _ScanTracker(self.window)

    def describe(self) -> dict:
        return {"family": self.name, "window": self.window}


StatisticFamily = LongestRunStatistic | ScanStatistic

_TABLE_CACHE: dict[tuple[str, ...], tuple[np.ndarray, np.ndarray]] = {}


def _tables(space: EndingBlockSpace) -> tuple[np.ndarray, np.ndarray]:
    key = space.states
    hit = _TABLE_CACHE.get(key)
    if hit is None:
        hit = (
            np.asarray(space.next0, dtype=np.intc),
            np.asarray(space.next1, dtype=np.intc),
        )
        _TABLE_CACHE[key] = hit
    return hit


def family_for(rule: str, window: int | None = None) -> StatisticFamily:
    """Build the statistic family for a chart rule name."""
    if rule == "longest-run":
        return LongestRunStatistic()
    if rule == "scan":
        if window is None:
            raise ParameterError("the scan rule needs a window size")
        return ScanStatistic(window)
    raise ParameterError(f"unknown rule {rule!r} (expected 'longest-run' or 'scan')")
