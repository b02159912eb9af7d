"""Particle labeled multi-Bernoulli filter."""

from src.tracker.association import association_marginals, enumerate_marginals, gibbs_marginals
from src.tracker.lmb import (
    SensorUpdateResult,
    extract_estimates,
    predict,
    prune_cap_belief,
    update_all_sensors,
    update_sensor,
)

__all__ = [
    "SensorUpdateResult",
    "association_marginals",
    "enumerate_marginals",
    "extract_estimates",
    "gibbs_marginals",
    "predict",
    "prune_cap_belief",
    "update_all_sensors",
    "update_sensor",
]
