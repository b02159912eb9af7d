"""Bearing-range sensor: observation function, likelihood and clutter."""

import math
from dataclasses import dataclass

import numpy as np

from src.config import SensorConfig
from src.core.errors import DegenerateGeometryError
from src.core.types import KinematicState, Measurement

TWO_PI = 2.0 * math.pi


def wrap_angle(angle: np.ndarray | float) -> np.ndarray | float:
    """Wrap angles into (-pi, pi]."""
    return math.pi - np.mod(math.pi - np.asarray(angle, dtype=float), TWO_PI)


@dataclass(frozen=True, slots=True)
class BearingRangeSensor:
    """Static bearing-range sensor.

    Bearing is measured from the +y axis toward +x, as
    ``atan2(px_s - px, py_s - py)``.
    """

    id: int
    position: tuple[float, float]
    bearing_std: float = 0.25
    range_std: float = 10.0
    detect_prob: float = 0.95
    clutter_rate: float = 10.0
    range_max: float = 20000.0

    def __post_init__(self) -> None:
        if not (self.bearing_std > 0 and self.range_std > 0):
            raise ValueError(f"Sensor {self.id}: noise stds must be positive")
        if not 0.0 <= self.detect_prob <= 1.0:
            raise ValueError(f"Sensor {self.id}: detect_prob outside [0, 1]")
        if self.clutter_rate < 0:
            raise ValueError(f"Sensor {self.id}: negative clutter rate")
        if not self.range_max > 0:
            raise ValueError(f"Sensor {self.id}: range_max must be positive")

    @classmethod
    def from_config(cls, sensor_id: int, config: SensorConfig) -> "BearingRangeSensor":
        return cls(
            id=sensor_id,
            position=(float(config.position[0]), float(config.position[1])),
            bearing_std=config.bearing_std,
            range_std=config.range_std,
            detect_prob=config.detect_prob,
            clutter_rate=config.clutter_rate,
            range_max=config.range_max,
        )

    @property
    def noise_cov(self) -> np.ndarray:
        return np.diag([self.bearing_std**2, self.range_std**2])

    @property
    def peak_density(self) -> float:
        return 1.0 / (TWO_PI * self.bearing_std * self.range_std)

    def detect_probs(self, states: np.ndarray) -> np.ndarray:
        """Detection probability per state: constant inside the observation volume, 0 beyond it."""
        states = np.asarray(states, dtype=float).reshape(-1, 4)
        ranges = np.hypot(self.position[0] - states[:, 0], self.position[1] - states[:, 2])
        return np.where(ranges <= self.range_max, self.detect_prob, 0.0)


def build_sensors(configs: list[SensorConfig]) -> list[BearingRangeSensor]:
    """Instantiate sensors with 1-based ids in configuration order."""
    return [BearingRangeSensor.from_config(i + 1, c) for i, c in enumerate(configs)]


def observe_states(sensor: BearingRangeSensor, states: np.ndarray) -> np.ndarray:
    """Noiseless ``(N, 2)`` bearing-range observations of an ``(N, 4)`` state array."""
    states = np.asarray(states, dtype=float).reshape(-1, 4)
    dx = sensor.position[0] - states[:, 0]
    dy = sensor.position[1] - states[:, 2]
    return np.column_stack([np.arctan2(dx, dy), np.hypot(dx, dy)])


def observe(sensor: BearingRangeSensor, x: KinematicState) -> Measurement:
    """Noiseless measurement of one state.

    Raises:
        DegenerateGeometryError: If the target sits exactly on the sensor
    """
    if x.px == sensor.position[0] and x.py == sensor.position[1]:
        raise DegenerateGeometryError(
            f"Target coincides with sensor {sensor.id} at {sensor.position}"
        )
    bearing, rng = observe_states(sensor, x.to_array())[0]
    return Measurement(float(bearing), float(rng))


def measurement_positions(sensor: BearingRangeSensor, z: np.ndarray) -> np.ndarray:
    """Invert ``(m, 2)`` bearing-range measurements to ``(m, 2)`` positions."""
    z = np.asarray(z, dtype=float).reshape(-1, 2)
    px = sensor.position[0] - z[:, 1] * np.sin(z[:, 0])
    py = sensor.position[1] - z[:, 1] * np.cos(z[:, 0])
    return np.column_stack([px, py])


def log_likelihood_matrix(
    sensor: BearingRangeSensor, z: np.ndarray, states: np.ndarray
) -> np.ndarray:
    """Log Gaussian likelihoods, shape ``(m, N)`` for ``m`` measurements and ``N`` states."""
    z = np.asarray(z, dtype=float).reshape(-1, 2)
    predicted = observe_states(sensor, states)
    d_bearing = wrap_angle(z[:, None, 0] - predicted[None, :, 0]) / sensor.bearing_std
    d_range = (z[:, None, 1] - predicted[None, :, 1]) / sensor.range_std
    return math.log(sensor.peak_density) - 0.5 * (d_bearing**2 + d_range**2)


def likelihood_matrix(sensor: BearingRangeSensor, z: np.ndarray, states: np.ndarray) -> np.ndarray:
    return np.exp(log_likelihood_matrix(sensor, z, states))


def likelihood(sensor: BearingRangeSensor, z: Measurement, x: KinematicState) -> float:
    """Measurement likelihood g(z | x) with the bearing residual wrapped."""
    return float(likelihood_matrix(sensor, z.to_array(), x.to_array())[0, 0])


def clutter_intensities(sensor: BearingRangeSensor, z: np.ndarray) -> np.ndarray:
    """Clutter intensity per measurement; zero outside the observation volume."""
    z = np.asarray(z, dtype=float).reshape(-1, 2)
    inside = (z[:, 1] >= 0) & (z[:, 1] <= sensor.range_max)
    return np.where(inside, sensor.clutter_rate / (TWO_PI * sensor.range_max), 0.0)


def clutter_intensity(sensor: BearingRangeSensor, z: Measurement) -> float:
    """Poisson clutter intensity lambda_c / (2 pi range_max) inside the volume."""
    return float(clutter_intensities(sensor, z.to_array())[0])
