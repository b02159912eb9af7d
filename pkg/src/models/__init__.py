"""Motion, sensor, clutter and birth-prior models."""

from src.models.motion import NcvModel, ncv_propagate, ncv_step
from src.models.prior import BirthPrior, sample_birth_prior
from src.models.sensor import (
    BearingRangeSensor,
    build_sensors,
    clutter_intensities,
    clutter_intensity,
    likelihood,
    likelihood_matrix,
    log_likelihood_matrix,
    measurement_positions,
    observe,
    observe_states,
    wrap_angle,
)

__all__ = [
    "BearingRangeSensor",
    "BirthPrior",
    "NcvModel",
    "build_sensors",
    "clutter_intensities",
    "clutter_intensity",
    "likelihood",
    "likelihood_matrix",
    "log_likelihood_matrix",
    "measurement_positions",
    "ncv_propagate",
    "ncv_step",
    "observe",
    "observe_states",
    "sample_birth_prior",
    "wrap_angle",
]
