"""Percent-reduction comparison of candidate runs against a baseline."""

import csv
import io
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

from src.core.errors import RunMismatchError
from src.harness.report import RunReport
from src.utils.file_handler import write_text_file

logger = logging.getLogger(__name__)

COMPARISON_FILE = "comparison.csv"
COMPARISON_HEADER = (
    "label",
    "wall_time",
    "runtime_reduction_pct",
    "computed",
    "evaluation_reduction_pct",
    "mean_ospa2",
    "ospa2_delta",
    "ospa2_delta_pct",
)


def percent_reduction(r1: float, r2: float) -> float:
    """``(r1 - r2) / r1 * 100``.

    Raises:
        ValueError: If the baseline value is not positive
    """
    if not r1 > 0:
        raise ValueError(f"Baseline value must be positive, got {r1}")
    return (r1 - r2) / r1 * 100.0


@dataclass(frozen=True)
class ComparisonRow:
    label: str
    wall_time: float
    runtime_reduction: float
    computed: int
    evaluation_reduction: float
    mean_ospa2: float
    ospa2_delta: float
    ospa2_delta_pct: float


def _reduction_or_zero(r1: float, r2: float) -> float:
    return percent_reduction(r1, r2) if r1 > 0 else 0.0


def compare_runs(
    baseline: RunReport, candidates: Sequence[RunReport], start: int = 0
) -> list[ComparisonRow]:
    """One row per candidate: runtime and evaluation reductions, OSPA(2) deltas.

    Reductions are 0 when the baseline quantity is 0. ``start`` restricts
    evaluation counts and OSPA(2) averages to steps ``>= start``.

    Raises:
        RunMismatchError: If a candidate was run on a different seed
    """
    base_evals = baseline.evaluations(start)
    base_ospa = baseline.mean_ospa2(start)
    rows: list[ComparisonRow] = []
    for run in candidates:
        if run.seed != baseline.seed or len(run.steps) != len(baseline.steps):
            raise RunMismatchError(
                f"Run '{run.label}' (seed {run.seed}, {len(run.steps)} steps) does not match "
                f"baseline '{baseline.label}' (seed {baseline.seed}, {len(baseline.steps)} steps)"
            )
        evals = run.evaluations(start)
        ospa_mean = run.mean_ospa2(start)
        delta = ospa_mean - base_ospa
        rows.append(
            ComparisonRow(
                label=run.label,
                wall_time=run.wall_time,
                runtime_reduction=_reduction_or_zero(baseline.wall_time, run.wall_time),
                computed=evals,
                evaluation_reduction=_reduction_or_zero(base_evals, evals),
                mean_ospa2=ospa_mean,
                ospa2_delta=delta,
                ospa2_delta_pct=delta / base_ospa * 100.0 if base_ospa > 0 else 0.0,
            )
        )
        logger.info(
            f"{run.label}: runtime -{rows[-1].runtime_reduction:.2f}%, "
            f"evaluations -{rows[-1].evaluation_reduction:.2f}%, OSPA2 delta {delta:+.3f}"
        )
    return rows


def format_comparison(rows: Sequence[ComparisonRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(COMPARISON_HEADER)
    for r in rows:
        writer.writerow(
            [
                r.label,
                f"{r.wall_time:.6f}",
                f"{r.runtime_reduction:.2f}",
                r.computed,
                f"{r.evaluation_reduction:.2f}",
                f"{r.mean_ospa2:.6f}",
                f"{r.ospa2_delta:.6f}",
                f"{r.ospa2_delta_pct:.2f}",
            ]
        )
    return buffer.getvalue()


def emit_comparison(rows: Sequence[ComparisonRow], out_dir: Path) -> Path:
    return write_text_file(Path(out_dir) / COMPARISON_FILE, format_comparison(rows))
