"""Scenario simulation: ground truth, measurements and dumps."""

from src.sim.dump import format_dump, parse_dump, read_dump, write_dump
from src.sim.scenario import (
    ScenarioData,
    TruthTrajectory,
    birth_prior,
    build_scenario,
    generate_measurements,
    generate_truth,
    motion_model,
)

__all__ = [
    "ScenarioData",
    "TruthTrajectory",
    "birth_prior",
    "build_scenario",
    "format_dump",
    "generate_measurements",
    "generate_truth",
    "motion_model",
    "parse_dump",
    "read_dump",
    "write_dump",
]
