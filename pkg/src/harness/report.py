"""Run reports: per-step records, totals, and their on-disk form."""

import csv
import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from src.birth.cache import EvalStats
from src.utils.analytics import STAGES, birth_fraction
from src.utils.file_handler import ensure_dir, read_text_file, write_text_file

logger = logging.getLogger(__name__)

SUMMARY_FILE = "summary.yaml"
STEPS_FILE = "steps.csv"

STEP_COUNTERS = ("computed", "memo_hits", "gated_skips", "preprune_removed", "component_skips")
STEPS_HEADER = ("step", *STEP_COUNTERS, "birth_count", "ospa2", "estimates")


@dataclass
class StepRecord:
    """Counters, metrics and stage wall-times of one timestep."""

    step: int
    stats: EvalStats
    birth_count: int
    ospa2: float
    estimates: int
    stage_times: dict[str, float] = field(default_factory=dict)


@dataclass
class RunReport:
    """Everything one run produced; totals are derived from the steps."""

    label: str
    seed: int
    toggles: dict[str, bool]
    steps: list[StepRecord] = field(default_factory=list)

    @property
    def totals(self) -> EvalStats:
        total = EvalStats()
        for record in self.steps:
            total = total + record.stats
        return total

    @property
    def stage_totals(self) -> dict[str, float]:
        totals = {name: 0.0 for name in STAGES}
        for record in self.steps:
            for name, seconds in record.stage_times.items():
                totals[name] = totals.get(name, 0.0) + seconds
        return totals

    @property
    def wall_time(self) -> float:
        return sum(self.stage_totals.values())

    @property
    def birth_fraction(self) -> float:
        return birth_fraction(self.stage_totals)

    @property
    def ospa2_series(self) -> list[float]:
        return [record.ospa2 for record in self.steps]

    def mean_ospa2(self, start: int = 0) -> float:
        """Time-averaged OSPA(2) over steps ``>= start``."""
        values = [r.ospa2 for r in self.steps if r.step >= start]
        return sum(values) / len(values) if values else 0.0

    def evaluations(self, start: int = 0) -> int:
        """Psi-bar computations over steps ``>= start``."""
        return sum(r.stats.computed for r in self.steps if r.step >= start)


def summary_document(report: RunReport) -> dict[str, Any]:
    return {
        "label": report.label,
        "seed": report.seed,
        "steps": len(report.steps),
        "toggles": dict(report.toggles),
        "totals": {**report.totals.as_dict(), "needed": report.totals.needed},
        "stage_seconds": report.stage_totals,
        "wall_time": report.wall_time,
        "birth_fraction": report.birth_fraction,
        "mean_ospa2": report.mean_ospa2(),
    }


def format_steps(report: RunReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([*STEPS_HEADER, *(f"t_{name}" for name in STAGES)])
    for r in report.steps:
        writer.writerow(
            [
                r.step,
                *(getattr(r.stats, name) for name in STEP_COUNTERS),
                r.birth_count,
                repr(r.ospa2),
                r.estimates,
                *(repr(r.stage_times.get(name, 0.0)) for name in STAGES),
            ]
        )
    return buffer.getvalue()


def emit_report(report: RunReport, out_dir: Path) -> list[Path]:
    """Write ``summary.yaml`` and ``steps.csv`` into ``out_dir``.

    Raises:
        OSError: If the directory or a file cannot be written
    """
    out_dir = ensure_dir(Path(out_dir))
    summary = yaml.safe_dump(summary_document(report), sort_keys=False)
    paths = [
        write_text_file(out_dir / SUMMARY_FILE, summary),
        write_text_file(out_dir / STEPS_FILE, format_steps(report)),
    ]
    logger.info(f"Report '{report.label}' written to {out_dir}")
    return paths


def load_report(run_dir: Path) -> RunReport:
    """Rebuild a report from an emitted run directory.

    ``gate_evaluations`` is not written per step and reads back as 0.

    Raises:
        FileNotFoundError: If either report file is missing
        ValueError: If the steps table has an unexpected header
    """
    run_dir = Path(run_dir)
    summary = yaml.safe_load(read_text_file(run_dir / SUMMARY_FILE)) or {}
    rows = list(csv.reader(io.StringIO(read_text_file(run_dir / STEPS_FILE))))
    if not rows or tuple(rows[0][: len(STEPS_HEADER)]) != STEPS_HEADER:
        raise ValueError(f"Unexpected steps header in {run_dir / STEPS_FILE}")

    header = rows[0]
    report = RunReport(
        label=str(summary.get("label", run_dir.name)),
        seed=int(summary["seed"]),
        toggles={k: bool(v) for k, v in (summary.get("toggles") or {}).items()},
    )
    for row in rows[1:]:
        values = dict(zip(header, row, strict=True))
        report.steps.append(
            StepRecord(
                step=int(values["step"]),
                stats=EvalStats(**{name: int(values[name]) for name in STEP_COUNTERS}),
                birth_count=int(values["birth_count"]),
                ospa2=float(values["ospa2"]),
                estimates=int(values["estimates"]),
                stage_times={
                    name: float(values[f"t_{name}"]) for name in STAGES if f"t_{name}" in values
                },
            )
        )
    return report
