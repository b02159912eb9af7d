"""Multi-object tracking metrics."""

from src.metrics.ospa import (
    LabeledTrackSet,
    OspaParams,
    assignment_min,
    ospa,
    ospa2,
    ospa2_series,
    window_weights,
)

__all__ = [
    "LabeledTrackSet",
    "OspaParams",
    "assignment_min",
    "ospa",
    "ospa2",
    "ospa2_series",
    "window_weights",
]
