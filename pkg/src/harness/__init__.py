"""Experiment harness: runs, reports and comparisons."""

from src.harness.compare import (
    ComparisonRow,
    compare_runs,
    emit_comparison,
    format_comparison,
    percent_reduction,
)
from src.harness.report import RunReport, StepRecord, emit_report, load_report
from src.harness.runner import (
    SUITE,
    run_and_emit,
    run_experiment,
    run_many,
    run_suite,
    suite_configs,
)

__all__ = [
    "SUITE",
    "ComparisonRow",
    "RunReport",
    "StepRecord",
    "compare_runs",
    "emit_comparison",
    "emit_report",
    "format_comparison",
    "load_report",
    "percent_reduction",
    "run_and_emit",
    "run_experiment",
    "run_many",
    "run_suite",
    "suite_configs",
]
