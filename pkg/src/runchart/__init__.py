"""Distribution-free runs-based control charts.

Exact conditional distributions of the longest-run and scan statistics given
the total success count, data-dependent control limits holding the conditional
signal level at alpha (with boundary randomization for exactness), and a Monte
Carlo run-length harness.
"""

from ._backend import BACKEND
from .chart import (
    ChartConfig,
    ChartState,
    LimitSolution,
    Monitor,
    RunLengthRecord,
    StepRecord,
    binarize,
    conditional_no_signal_probability,
    randomized_signal_level,
    run_length,
    solve_limit,
)
from .engine import (
    ForwardVector,
    SurvivalComputer,
    joint_two_step,
    lift_to_next_count,
    statistic_pmf,
    step,
    survival_probability,
)
from .families import LongestRunStatistic, ScanStatistic, family_for
from .patterns import (
    CompoundPattern,
    EndingBlockSpace,
    LongestRunKind,
    ScanKind,
    build_ending_blocks,
    count_simple_patterns,
    generate_scan_compound,
    longest_run_pattern,
)
from .simulate import (
    ArlEstimate,
    Distribution,
    GeometricFit,
    ScenarioSpec,
    estimate_arl,
    exponential,
    geometric_check,
    normal,
    student_t,
    sweep_threshold,
    uniform,
)

__version__ = "0.1.0"

__all__ = [
    "ArlEstimate",
    "BACKEND",
    "ChartConfig",
    "ChartState",
    "CompoundPattern",
    "Distribution",
    "EndingBlockSpace",
    "ForwardVector",
    "GeometricFit",
    "LimitSolution",
    "LongestRunKind",
    "LongestRunStatistic",
    "Monitor",
    "RunLengthRecord",
    "ScanKind",
    "ScanStatistic",
    "ScenarioSpec",
    "StepRecord",
    "SurvivalComputer",
    "binarize",
    "build_ending_blocks",
    "conditional_no_signal_probability",
    "count_simple_patterns",
    "estimate_arl",
    "exponential",
    "family_for",
    "generate_scan_compound",
    "geometric_check",
    "joint_two_step",
    "lift_to_next_count",
    "longest_run_pattern",
    "normal",
    "randomized_signal_level",
    "run_length",
    "solve_limit",
    "statistic_pmf",
    "step",
    "student_t",
    "survival_probability",
    "sweep_threshold",
    "uniform",
]
