"""End-to-end experiment runs: one seeded simulation, a batch, or the efficiency suite."""

import asyncio
import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from src.birth.likelihood import PsiContext
from src.birth.pipeline import adaptive_birth_step
from src.config import AppConfig, ToggleConfig
from src.core.errors import ConfigurationError
from src.core.types import LmbDensity
from src.harness.compare import ComparisonRow, compare_runs, emit_comparison
from src.harness.report import RunReport, StepRecord, emit_report
from src.metrics.ospa import LabeledTrackSet, OspaParams, ospa2
from src.sim.dump import write_dump
from src.sim.scenario import ScenarioData, birth_prior, build_scenario, motion_model
from src.tracker.lmb import extract_estimates, predict, prune_cap_belief, update_all_sensors
from src.utils.analytics import STAGE_FILTER_UPDATE, STAGE_METRICS, StageTimer
from src.utils.rng import Stream, substream

logger = logging.getLogger(__name__)

DUMP_FILE = "scenario.dump"

# Row set of the efficiency table: label and the toggles switched on
SUITE: tuple[tuple[str, dict[str, bool]], ...] = (
    ("baseline", {}),
    ("preprune", {"preprune": True}),
    ("gating", {"gate": True}),
    ("memoization", {"memoize": True}),
    ("prune_cap", {"prune_cap": True}),
    ("sample_skipping", {"skip_miss": True}),
    ("all_on", ToggleConfig.all_on().as_dict()),
)


def run_experiment(
    cfg: AppConfig,
    scenario: ScenarioData | None = None,
    on_birth: Callable[[int, LmbDensity], None] | None = None,
) -> RunReport:
    """Run one seeded simulation.

    Each step updates the belief with every sensor, builds the birth LMB
    from the step's measurements, prunes and extracts estimates, scores
    OSPA(2) against the truth, then predicts to the next step.

    Args:
        cfg: Run configuration; disabled mechanisms run at neutral settings
        scenario: Pre-built scenario; generated from ``cfg.scenario`` if omitted
        on_birth: Called with each step and the birth LMB built at it

    Raises:
        ConfigurationError: Before step 0 if the run cannot be set up
    """
    birth_cfg = cfg.effective_birth()
    sc = cfg.scenario
    data = scenario if scenario is not None else build_scenario(sc)
    if not data.sensors:
        raise ConfigurationError("Run needs at least one sensor")
    has_targets = bool(data.truth) or any(z.size for scans in data.measurements for z in scans)
    silent = [s.id for s in data.sensors if not s.clutter_rate > 0]
    if silent and has_targets:
        raise ConfigurationError(
            f"Sensors {silent} have zero clutter rate; measurement pseudolikelihoods "
            "are undefined without a positive clutter density"
        )
    model = motion_model(sc)
    prior = birth_prior(sc, birth_cfg.velocity_std, birth_cfg.num_particles)
    params = OspaParams()

    report = RunReport(label=cfg.output.label, seed=sc.seed, toggles=cfg.toggles.as_dict())
    truth_tracks = LabeledTrackSet()
    estimate_tracks = LabeledTrackSet()
    timer = StageTimer()
    lmb = LmbDensity()
    logger.info(
        f"Run '{cfg.output.label}' started: seed {sc.seed}, {data.duration} steps, "
        f"{len(data.sensors)} sensors, toggles {cfg.toggles.as_dict()}"
    )

    for k in range(data.duration):
        timer.reset()
        scans = data.measurements[k]
        filter_rng = substream(sc.seed, Stream.FILTER, k)

        with timer.stage(STAGE_FILTER_UPDATE):
            posterior, assoc = update_all_sensors(lmb, data.sensors, scans, cfg.filter, filter_rng)
            posterior = prune_cap_belief(posterior, cfg.filter)

        ctx = PsiContext(tuple(data.sensors), tuple(scans), prior, k, sc.seed)
        birth, stats = adaptive_birth_step(ctx, assoc, birth_cfg, model, timer=timer)
        if on_birth is not None:
            on_birth(k, birth)

        with timer.stage(STAGE_METRICS):
            estimates = extract_estimates(posterior, cfg.filter.extract_threshold)
            ids, states = data.truth_at(k)
            truth_tracks.add_step(k, zip(ids, states[:, [0, 2]], strict=True))
            estimate_tracks.add_step(k, ((label, est.position) for label, est in estimates))
            distance = ospa2(truth_tracks, estimate_tracks, params, k)

        with timer.stage(STAGE_FILTER_UPDATE):
            lmb = predict(posterior, birth, model, cfg.filter.survival_prob, filter_rng)

        report.steps.append(
            StepRecord(
                step=k,
                stats=stats,
                birth_count=len(birth),
                ospa2=distance,
                estimates=len(estimates),
                stage_times=timer.snapshot(),
            )
        )
        logger.info(
            f"[{cfg.output.label}] step {k}: computed {stats.computed}, "
            f"memo hits {stats.memo_hits}, births {len(birth)}, "
            f"estimates {len(estimates)}/{len(ids)}, OSPA2 {distance:.2f}"
        )

    logger.info(
        f"Run '{cfg.output.label}' finished: {report.wall_time:.2f}s, "
        f"{report.totals.computed} psi-bar computations, birth share {report.birth_fraction:.1%}"
    )
    return report


def run_and_emit(cfg: AppConfig) -> RunReport:
    """Run, then write the report (and the scenario dump if enabled) to ``cfg.output.dir``."""
    data = build_scenario(cfg.scenario)
    report = run_experiment(cfg, data)
    emit_report(report, cfg.output.dir)
    if cfg.output.dump_scenario:
        write_dump(data, Path(cfg.output.dir) / DUMP_FILE)
    return report


async def run_many(
    configs: Sequence[AppConfig], serial: bool = True, max_workers: int | None = None
) -> list[RunReport]:
    """Run several configurations in worker processes.

    With ``serial`` set, runs go through a single worker one at a time so
    wall times are free of contention.

    Returns:
        Reports in the order of ``configs``
    """
    loop = asyncio.get_running_loop()
    workers = 1 if serial else max_workers
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [loop.run_in_executor(pool, run_and_emit, cfg) for cfg in configs]
        reports = await asyncio.gather(*futures)
    return list(reports)


def suite_configs(cfg: AppConfig, out_dir: Path) -> list[AppConfig]:
    """Baseline, each mechanism alone, and all on; one output directory each."""
    configs: list[AppConfig] = []
    for label, toggles in SUITE:
        configs.append(
            cfg.with_updates(
                toggles={**ToggleConfig().as_dict(), **toggles},
                output={"label": label, "dir": Path(out_dir) / label},
            )
        )
    return configs


def run_suite(cfg: AppConfig, out_dir: Path, start: int = 0) -> list[ComparisonRow]:
    """Run the efficiency suite serially and write the comparison table.

    Returns:
        One row per non-baseline run, in suite order
    """
    reports = asyncio.run(run_many(suite_configs(cfg, out_dir), serial=True))
    baseline, candidates = reports[0], reports[1:]
    rows = compare_runs(baseline, candidates, start=start)
    path = emit_comparison(rows, out_dir)
    logger.info(f"Efficiency suite written to {path}")
    return rows
