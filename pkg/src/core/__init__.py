"""Core value types: labels, measurement tuples, particles, LMB densities."""

from src.core.errors import (
    ConfigurationError,
    DegenerateGeometryError,
    LabelCollisionError,
    NormalizationError,
    RunMismatchError,
    TrackingError,
)
from src.core.types import (
    BernoulliComponent,
    KinematicState,
    Label,
    LmbDensity,
    Measurement,
    MeasurementTuple,
    Particle,
    ParticleSet,
    labels_distinct,
    tuple_all_miss,
    tuple_is_valid,
    tuple_missed_count,
)

__all__ = [
    "BernoulliComponent",
    "ConfigurationError",
    "DegenerateGeometryError",
    "KinematicState",
    "Label",
    "LabelCollisionError",
    "LmbDensity",
    "Measurement",
    "MeasurementTuple",
    "NormalizationError",
    "Particle",
    "ParticleSet",
    "RunMismatchError",
    "TrackingError",
    "labels_distinct",
    "tuple_all_miss",
    "tuple_is_valid",
    "tuple_missed_count",
]
