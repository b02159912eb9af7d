"""Shared fixtures."""

import math

import numpy as np
import pytest

from src.birth.likelihood import PsiContext
from src.config import AppConfig, reset_config
from src.models.prior import BirthPrior
from src.models.sensor import BearingRangeSensor, observe_states

REGION = (0.0, 10000.0, 0.0, 10000.0)


@pytest.fixture(autouse=True)
def _fresh_config():
    reset_config()
    yield
    reset_config()


@pytest.fixture
def prior() -> BirthPrior:
    return BirthPrior(REGION, velocity_std=35.0, num_particles=500)


@pytest.fixture
def sensor_pair() -> tuple[BearingRangeSensor, BearingRangeSensor]:
    return (
        BearingRangeSensor(1, (0.0, 0.0)),
        BearingRangeSensor(2, (10000.0, 0.0)),
    )


@pytest.fixture
def target() -> np.ndarray:
    return np.array([[5000.0, 10.0, 5000.0, -10.0]])


@pytest.fixture
def pair_context(sensor_pair, prior, target) -> PsiContext:
    """Two sensors, each seeing the target (row 0) and one far clutter point (row 1)."""
    scans = []
    for sensor in sensor_pair:
        detection = observe_states(sensor, target)[0]
        clutter = [wrap(detection[0] + 1.5), 2000.0]
        scans.append(np.array([detection, clutter]))
    return PsiContext(tuple(sensor_pair), tuple(scans), prior, timestep=3, base_seed=11)


def wrap(angle: float) -> float:
    return math.pi - (math.pi - angle) % (2 * math.pi)


@pytest.fixture
def small_config() -> AppConfig:
    """Short three-sensor run with reduced particle counts."""
    sensors = [
        {"position": (0.0, 0.0), "clutter_rate": 2.0},
        {"position": (10000.0, 0.0), "clutter_rate": 2.0},
        {"position": (5000.0, 10000.0), "clutter_rate": 2.0},
    ]
    return AppConfig().with_updates(
        scenario={"duration": 6, "seed": 7, "sensors": sensors, "max_births_per_epoch": 2},
        filter={"track_particles": 200, "assoc_samples": 30},
        birth={
            "num_chains": 5,
            "chain_length": 3,
            "num_particles": 200,
            "posterior_particles": 200,
        },
        output={"label": "small"},
    )
