"""Ground truth and measurement generation."""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from src.config import ScenarioConfig
from src.models.motion import NcvModel, ncv_propagate
from src.models.prior import BirthPrior
from src.models.sensor import BearingRangeSensor, build_sensors, observe_states, wrap_angle
from src.utils.rng import Stream, substream

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TruthTrajectory:
    """One true target from its birth step to the end of the scenario."""

    id: int
    birth_step: int
    states: np.ndarray

    @property
    def last_step(self) -> int:
        return self.birth_step + len(self.states) - 1

    def state_at(self, step: int) -> np.ndarray | None:
        if self.birth_step <= step <= self.last_step:
            return self.states[step - self.birth_step]
        return None


@dataclass
class ScenarioData:
    """Truth, sensors and per-step per-sensor measurement arrays."""

    sensors: list[BearingRangeSensor]
    truth: list[TruthTrajectory]
    measurements: list[list[np.ndarray]]

    @property
    def duration(self) -> int:
        return len(self.measurements)

    def truth_at(self, step: int) -> tuple[list[int], np.ndarray]:
        """Ids and ``(n, 4)`` states of targets alive at ``step``."""
        ids: list[int] = []
        states: list[np.ndarray] = []
        for trajectory in self.truth:
            state = trajectory.state_at(step)
            if state is not None:
                ids.append(trajectory.id)
                states.append(state)
        return ids, np.array(states, dtype=float).reshape(-1, 4)


def motion_model(cfg: ScenarioConfig) -> NcvModel:
    return NcvModel(cfg.dt, (cfg.accel_noise[0], cfg.accel_noise[1]))


def birth_prior(cfg: ScenarioConfig, velocity_std: float, num_particles: int) -> BirthPrior:
    return BirthPrior(cfg.region, velocity_std=velocity_std, num_particles=num_particles)


def generate_truth(cfg: ScenarioConfig, rng: np.random.Generator) -> list[TruthTrajectory]:
    """Targets born every ``birth_period`` steps, persisting to the end.

    Each epoch draws a count from U{0..max_births_per_epoch}; each target
    starts uniformly in the region with the configured speed and a uniform
    heading, then follows noisy NCV motion.
    """
    model = motion_model(cfg)
    xmin, xmax, ymin, ymax = cfg.region
    trajectories: list[TruthTrajectory] = []
    for epoch in range(0, cfg.duration, cfg.birth_period):
        count = int(rng.integers(0, cfg.max_births_per_epoch + 1))
        for _ in range(count):
            heading = math.pi - rng.uniform(0.0, 2.0 * math.pi)
            state = np.array(
                [
                    rng.uniform(xmin, xmax),
                    cfg.speed * math.cos(heading),
                    rng.uniform(ymin, ymax),
                    cfg.speed * math.sin(heading),
                ]
            )
            states = [state]
            for _ in range(epoch + 1, cfg.duration):
                states.append(ncv_propagate(model, states[-1], rng)[0])
            trajectories.append(TruthTrajectory(len(trajectories), epoch, np.array(states)))
    logger.debug(f"Generated {len(trajectories)} truth trajectories")
    return trajectories


def generate_measurements(
    states: np.ndarray,
    sensors: Sequence[BearingRangeSensor],
    rng: np.random.Generator,
    add_noise: bool = True,
) -> list[np.ndarray]:
    """Detections plus Poisson clutter for each sensor, shuffled together.

    Args:
        states: ``(n, 4)`` true states at this step
        sensors: Sensors in index order
        rng: Measurement stream
        add_noise: Add Gaussian measurement noise to detections

    Returns:
        Per-sensor ``(m, 2)`` arrays of (bearing, range)
    """
    states = np.asarray(states, dtype=float).reshape(-1, 4)
    scans: list[np.ndarray] = []
    for sensor in sensors:
        detected = rng.random(states.shape[0]) < sensor.detect_probs(states)
        detections = observe_states(sensor, states[detected])
        if add_noise and detections.size:
            noise = rng.standard_normal(detections.shape) * [sensor.bearing_std, sensor.range_std]
            detections = detections + noise
            detections[:, 0] = wrap_angle(detections[:, 0])
            detections[:, 1] = np.abs(detections[:, 1])
            # A sensor reports nothing beyond its observation volume
            detections = detections[detections[:, 1] <= sensor.range_max]

        num_clutter = int(rng.poisson(sensor.clutter_rate))
        clutter = np.column_stack(
            [
                math.pi - rng.uniform(0.0, 2.0 * math.pi, size=num_clutter),
                rng.uniform(0.0, sensor.range_max, size=num_clutter),
            ]
        )
        scan = np.vstack([detections.reshape(-1, 2), clutter.reshape(-1, 2)])
        scans.append(scan[rng.permutation(scan.shape[0])])
    return scans


def build_scenario(cfg: ScenarioConfig) -> ScenarioData:
    """Truth and measurements for a whole run, from labeled substreams of ``cfg.seed``."""
    sensors = build_sensors(cfg.resolved_sensors())
    truth = generate_truth(cfg, substream(cfg.seed, Stream.TRUTH))
    data = ScenarioData(sensors=sensors, truth=truth, measurements=[])
    for step in range(cfg.duration):
        _, states = data.truth_at(step)
        rng = substream(cfg.seed, Stream.MEASUREMENTS, step)
        data.measurements.append(generate_measurements(states, sensors, rng))
    logger.info(
        f"Scenario built: {cfg.duration} steps, {len(sensors)} sensors, {len(truth)} targets"
    )
    return data
