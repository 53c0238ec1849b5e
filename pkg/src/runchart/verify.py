"""Grid cross-checks: propagation engine versus exhaustive enumeration.

Backs the `runchart verify` subcommand and the acceptance suite.  Every case
is checked twice against the oracle: once through survival_probability (the
forward-vector reference) and once through the memoized SurvivalComputer (the
table route the charts use), so a mismatch pinpoints the broken side.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from . import oracle
from .engine import SurvivalComputer, joint_two_step, survival_probability
from .families import LongestRunStatistic, ScanStatistic


@dataclass(frozen=True)
class Mismatch:
    case: str
    expected: Fraction
    got: Fraction
    route: str


def conditional_grid(max_n: int = 12, max_run: int = 6, max_window: int = 6,
                     budget: int = 10**6) -> tuple[int, list[Mismatch]]:
    """Compare conditional survival on the full small-instance grid.

    Covers longest-run thresholds 1..max_run and every scan pair
    (window <= max_window, 1 <= count <= window) for all n <= max_n, 0 <= m <= n.
    Returns (cases checked, mismatches).
    """
    checked = 0
    bad: list[Mismatch] = []

    def check(n, m, family, k, want, computer):
        nonlocal checked
        got_ref = survival_probability(n, m, family.threshold_pattern(k), mode="exact")
        got_tab = computer.survival(n, m, k)
        checked += 1
        label = f"{family.describe()} n={n} m={m} k={k}"
        if got_ref != want:
            bad.append(Mismatch(label, want, got_ref, "survival_probability"))
        if got_tab != want:
            bad.append(Mismatch(label, want, got_tab, "SurvivalComputer"))

    run_family = LongestRunStatistic()
    run_computer = SurvivalComputer(run_family, "exact")
    for n in range(1, max_n + 1):
        for m in range(n + 1):
            hist = oracle.stat_histogram(n, m, run_family, budget)
            total = comb(n, m)
            for d in range(1, max_run + 1):
                want = Fraction(sum(c for v, c in hist.items() if v < d), total)
                check(n, m, run_family, d, want, run_computer)

    for window in range(1, max_window + 1):
        scan_family = ScanStatistic(window)
        scan_computer = SurvivalComputer(scan_family, "exact")
        for n in range(1, max_n + 1):
            for m in range(n + 1):
                hist = oracle.stat_histogram(n, m, scan_family, budget)
                total = comb(n, m)
                for s in range(1, window + 1):
                    want = Fraction(sum(c for v, c in hist.items() if v < s), total)
                    check(n, m, scan_family, s, want, scan_computer)
    return checked, bad


def joint_grid(max_n: int = 10, budget: int = 10**6) -> tuple[int, list[Mismatch]]:
    """Compare the two-step joint distribution of the longest run on all pairs."""
    checked = 0
    bad: list[Mismatch] = []
    family = LongestRunStatistic()
    computer = SurvivalComputer(family, "exact")
    for n in range(1, max_n + 1):
        for m in range(n + 1):
            hist = oracle.joint_histogram(n, m, family, budget)
            total = comb(n, m)
            for a in range(m + 1):
                for b in range(m + 1):
                    want = Fraction(hist.get((a, b), 0), total)
                    got = joint_two_step(n, m, family, a, b, computer=computer)
                    checked += 1
                    if got != want:
                        bad.append(Mismatch(
                            f"joint n={n} m={m} a={a} b={b}", want, got, "joint_two_step"
                        ))
    return checked, bad


def run_verification(max_n: int = 10, max_run: int = 6, max_window: int = 5,
                     joint_max_n: int = 8) -> tuple[list[str], bool]:
    """Human-readable verification report; ok is False on any mismatch."""
    lines = []
    c_checked, c_bad = conditional_grid(max_n=max_n, max_run=max_run, max_window=max_window)
    lines.append(f"conditional grid (n <= {max_n}): {c_checked} cases, "
                 f"{len(c_bad)} mismatches")
    j_checked, j_bad = joint_grid(max_n=joint_max_n)
    lines.append(f"joint grid (n <= {joint_max_n}): {j_checked} cases, "
                 f"{len(j_bad)} mismatches")
    for miss in (c_bad + j_bad)[:20]:
        lines.append(f"  MISMATCH [{miss.route}] {miss.case}: "
                     f"expected {miss.expected}, got {miss.got}")
    ok = not c_bad and not j_bad
    lines.append("verification PASSED" if ok else "verification FAILED")
    return lines, ok
