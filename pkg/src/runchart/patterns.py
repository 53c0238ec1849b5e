"""Binary pattern sets behind runs/scan events and their suffix automata.

A scan alarm ("some window of r consecutive trials holds at least s ones")
and a long-run alarm ("d consecutive ones occur") are both equivalent to the
first occurrence of one of a finite set of simple 0/1 patterns.  This module
generates those pattern sets and compiles them into an ending-block automaton:
a DFA over {0,1} whose state is the longest suffix of the observed string that
is still a proper prefix of some pattern, with a single absorbing state entered
exactly when a pattern first completes.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .errors import ParameterError

_BITS = frozenset("01")


@dataclass(frozen=True)
class ScanKind:
    """Event tag: some window of `window` consecutive trials holds >= `count` ones."""

    window: int
    count: int


@dataclass(frozen=True)
class LongestRunKind:
    """Event tag: a run of `length` consecutive ones occurs."""

    length: int


@dataclass(frozen=True)
class CompoundPattern:
    """A finite set of simple 0/1 patterns; the tracked event is that one occurs.

    Patterns are strings over "01", pairwise distinct, ordered by length then
    lexicographically so that generated sets are reproducible.
    """

    patterns: tuple[str, ...]
    kind: ScanKind | LongestRunKind | None = None

    def __post_init__(self):
        if not self.patterns:
            raise ParameterError("a compound pattern needs at least one simple pattern")
        seen = set()
        for pat in self.patterns:
            if not pat or set(pat) - _BITS:
                raise ParameterError(f"not a non-empty 0/1 pattern: {pat!r}")
            if pat in seen:
                raise ParameterError(f"duplicate simple pattern: {pat!r}")
            seen.add(pat)

    def to_json_dict(self) -> dict:
        if isinstance(self.kind, ScanKind):
            kind = {"family": "scan", "window": self.kind.window, "count": self.kind.count}
        elif isinstance(self.kind, LongestRunKind):
            kind = {"family": "longest-run", "length": self.kind.length}
        else:
            kind = None
        return {"kind": kind, "patterns": list(self.patterns)}


def count_simple_patterns(window: int, count: int) -> int:
    """Number of simple patterns for the scan event with parameters (window, count).

    Sums binomial gap placements; requires count >= 2, with count == 1 returning
    1 by convention (the single pattern "1", a plain threshold-crossing rule).
    """
    if window < 1 or count < 1 or count > window:
        raise ParameterError(f"need 1 <= count <= window, got ({window}, {count})")
    if count == 1:
        return 1
    return sum(math.comb(count - 2 + v, v) for v in range(window - count + 1))


def generate_scan_compound(window: int, count: int) -> CompoundPattern:
    """All patterns of length <= window with exactly `count` ones, bounded by ones.

    The joint non-occurrence of these patterns is exactly the event that every
    window of `window` consecutive trials holds fewer than `count` ones.
    """
    if window < 1 or count < 1 or count > window:
        raise ParameterError(f"need 1 <= count <= window, got ({window}, {count})")
    if count == 1:
        return CompoundPattern(("1",), ScanKind(window, 1))
    pats = []
    for length in range(count, window + 1):
        # interior slots may hold the remaining count-2 ones in any positions
        for ones in itertools.combinations(range(length - 2), count - 2):
            middle = ["0"] * (length - 2)
            for i in ones:
                middle[i] = "1"
            pats.append("1" + "".join(middle) + "1")
    pats.sort(key=lambda p: (len(p), p))
    return CompoundPattern(tuple(pats), ScanKind(window, count))


def longest_run_pattern(length: int) -> CompoundPattern:
    """The single pattern of `length` consecutive ones."""
    if length < 1:
        raise ParameterError(f"run length must be >= 1, got {length}")
    return CompoundPattern(("1" * length,), LongestRunKind(length))


@dataclass(frozen=True)
class EndingBlockSpace:
    """Suffix automaton of proper subpatterns, with the empty state first.

    ``next0[i]``/``next1[i]`` give the successor index of ``states[i]`` on
    reading 0/1, with -1 standing for the absorbing state (a pattern just
    completed).  Only states reachable from the empty state are kept.
    """

    states: tuple[str, ...]
    next0: tuple[int, ...]
    next1: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.states)

    def index(self, state: str) -> int:
        return self.states.index(state)

    def ones(self) -> tuple[int, ...]:
        return tuple(s.count("1") for s in self.states)

    def transition(self, state: str, bit: int) -> str | None:
        """Successor state string, or None once absorbed."""
        nxt = (self.next1 if bit else self.next0)[self.index(state)]
        return None if nxt < 0 else self.states[nxt]

    def feed(self, bits) -> int | None:
        """1-based position at which the automaton absorbs, or None if it never does."""
        si = 0
        for pos, bit in enumerate(bits, start=1):
            si = (self.next1 if bit else self.next0)[si]
            if si < 0:
                return pos
        return None


def _longest_live_suffix(word: str, prefixes: frozenset[str], full: frozenset[str]) -> str | None:
    """Ending block after reading `word`'s last symbol, or None if a pattern completed."""
    for start in range(len(word)):
        if word[start:] in full:
            return None
    for start in range(len(word) + 1):
        suffix = word[start:]
        if suffix in prefixes:
            return suffix
    raise AssertionError("empty suffix is always a prefix")


def build_ending_blocks(cp: CompoundPattern) -> EndingBlockSpace:
    """Compile a compound pattern into its ending-block automaton.

    States are the proper prefixes of the patterns reachable from the empty
    state; transitions follow the longest-suffix rule, and any transition that
    completes a pattern maps to the absorbing state (-1).
    """
    full = frozenset(cp.patterns)
    prefixes = frozenset(p[:i] for p in cp.patterns for i in range(len(p)))

    trans: dict[str, tuple[str | None, str | None]] = {}
    order: list[str] = []
    queue = deque([""])
    seen = {""}
    while queue:
        state = queue.popleft()
        order.append(state)
        nxt = []
        for bit in "01":
            succ = _longest_live_suffix(state + bit, prefixes, full)
            nxt.append(succ)
            if succ is not None and succ not in seen:
                seen.add(succ)
                queue.append(succ)
        trans[state] = (nxt[0], nxt[1])

    states = [""] + sorted((s for s in order if s), key=lambda s: (len(s), s))
    pos = {s: i for i, s in enumerate(states)}
    next0 = tuple(-1 if trans[s][0] is None else pos[trans[s][0]] for s in states)
    next1 = tuple(-1 if trans[s][1] is None else pos[trans[s][1]] for s in states)
    return EndingBlockSpace(tuple(states), next0, next1)


@lru_cache(maxsize=None)
def _cached_space(patterns: tuple[str, ...]) -> EndingBlockSpace:
    return build_ending_blocks(CompoundPattern(patterns))


def ending_blocks_for(cp: CompoundPattern) -> EndingBlockSpace:
    """Memoized ending-block automaton for a compound pattern."""
    return _cached_space(cp.patterns)
