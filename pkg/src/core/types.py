"""Value types shared by every tracking module.

Kinematic states are stored as ``[px, vx, py, vy]``. Particle sets keep their
states as an ``(N, 4)`` array so the filter and the birth procedure can work
on whole sets at once; single-state types exist for the scalar API.
"""

import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from src.core.errors import ConfigurationError, NormalizationError

STATE_DIM = 4
POSITION_AXES = (0, 2)

# One index per sensor; 0 is the miss-detection, j >= 1 is the 1-based
# index into that sensor's measurement set.
MeasurementTuple = tuple[int, ...]

_NORMALIZED_TOL = 1e-9


@dataclass(frozen=True, slots=True)
class KinematicState:
    """Planar position and velocity of one target."""

    px: float
    vx: float
    py: float
    vy: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.px, self.vx, self.py, self.vy)):
            raise ValueError(f"Non-finite kinematic state: {self}")

    def to_array(self) -> np.ndarray:
        return np.array([self.px, self.vx, self.py, self.vy], dtype=float)

    @classmethod
    def from_array(cls, values: Sequence[float] | np.ndarray) -> "KinematicState":
        px, vx, py, vy = (float(v) for v in values)
        return cls(px, vx, py, vy)

    @property
    def position(self) -> tuple[float, float]:
        return (self.px, self.py)


@dataclass(frozen=True, slots=True)
class Measurement:
    """Bearing-range measurement (bearing in (-pi, pi], range >= 0)."""

    bearing: float
    range: float

    def __post_init__(self) -> None:
        if self.range < 0:
            raise ValueError(f"Negative range: {self.range}")
        if not -math.pi < self.bearing <= math.pi:
            raise ValueError(f"Bearing outside (-pi, pi]: {self.bearing}")

    def to_array(self) -> np.ndarray:
        return np.array([self.bearing, self.range], dtype=float)


class Label(NamedTuple):
    """Track label: birth timestep and the measurement tuple it was born from."""

    birth_time: int
    meas_tuple: MeasurementTuple


def tuple_missed_count(meas_tuple: MeasurementTuple) -> int:
    """Count the miss-detection entries of a measurement tuple."""
    return sum(1 for j in meas_tuple if j == 0)


def tuple_all_miss(num_sensors: int) -> MeasurementTuple:
    """Build the all-miss tuple for ``num_sensors`` sensors.

    Raises:
        ConfigurationError: If ``num_sensors`` is less than 1
    """
    if num_sensors < 1:
        raise ConfigurationError(f"Sensor count must be positive, got {num_sensors}")
    return (0,) * num_sensors


def tuple_is_valid(meas_tuple: MeasurementTuple, sizes: Sequence[int]) -> bool:
    """Check tuple length and per-sensor index ranges against set sizes."""
    if len(meas_tuple) != len(sizes):
        return False
    return all(0 <= j <= m for j, m in zip(meas_tuple, sizes, strict=True))


@dataclass(frozen=True, slots=True)
class Particle:
    """One weighted kinematic sample."""

    state: KinematicState
    weight: float

    def __post_init__(self) -> None:
        if self.weight < 0:
            raise ValueError(f"Negative particle weight: {self.weight}")


@dataclass(frozen=True)
class ParticleSet:
    """Weighted samples of a spatial density.

    Attributes:
        states: ``(N, 4)`` array of ``[px, vx, py, vy]``
        weights: ``(N,)`` nonnegative weights (not necessarily normalized)
        degenerate: Set when every weight is zero
    """

    states: np.ndarray
    weights: np.ndarray
    degenerate: bool = field(default=False)

    def __post_init__(self) -> None:
        states = np.array(self.states, dtype=float).reshape(-1, STATE_DIM)
        weights = np.array(self.weights, dtype=float).reshape(-1)
        if states.shape[0] != weights.shape[0]:
            raise ValueError(
                f"State/weight count mismatch: {states.shape[0]} vs {weights.shape[0]}"
            )
        if np.any(weights < 0):
            raise ValueError("Particle weights must be nonnegative")
        states.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "weights", weights)

    def __len__(self) -> int:
        return self.weights.shape[0]

    def __iter__(self) -> Iterator[Particle]:
        for row, w in zip(self.states, self.weights, strict=True):
            yield Particle(KinematicState.from_array(row), float(w))

    @classmethod
    def from_particles(cls, particles: Iterable[Particle]) -> "ParticleSet":
        items = list(particles)
        states = np.array([p.state.to_array() for p in items], dtype=float)
        weights = np.array([p.weight for p in items], dtype=float)
        return cls(states.reshape(-1, STATE_DIM), weights)

    @classmethod
    def uniform(cls, states: np.ndarray) -> "ParticleSet":
        """Equally weighted set over the given states."""
        states = np.asarray(states, dtype=float).reshape(-1, STATE_DIM)
        n = states.shape[0]
        return cls(states, np.full(n, 1.0 / n) if n else np.empty(0))

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    @property
    def is_normalized(self) -> bool:
        return len(self) > 0 and abs(self.total_weight - 1.0) <= _NORMALIZED_TOL

    def normalized(self) -> "ParticleSet":
        """Rescale weights to sum to one.

        Raises:
            NormalizationError: If the weights sum to zero
        """
        total = self.total_weight
        if not total > 0:
            raise NormalizationError("Cannot normalize a particle set with zero total weight")
        return ParticleSet(self.states, self.weights / total)

    def mean(self) -> KinematicState:
        """Weighted mean state."""
        return KinematicState.from_array(self.normalized().weights @ self.states)

    def positions(self) -> np.ndarray:
        return self.states[:, POSITION_AXES]


@dataclass(frozen=True)
class BernoulliComponent:
    """Labeled Bernoulli component of an LMB density."""

    label: Label
    existence: float
    spatial: ParticleSet

    def __post_init__(self) -> None:
        if not 0.0 <= self.existence <= 1.0:
            raise ValueError(f"Existence outside [0, 1] for {self.label}: {self.existence}")

    def with_existence(self, existence: float) -> "BernoulliComponent":
        return BernoulliComponent(self.label, existence, self.spatial)


@dataclass(frozen=True)
class LmbDensity:
    """Set of labeled Bernoulli components."""

    components: tuple[BernoulliComponent, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self) -> Iterator[BernoulliComponent]:
        return iter(self.components)

    @property
    def labels(self) -> list[Label]:
        return [c.label for c in self.components]

    @property
    def existences(self) -> np.ndarray:
        return np.array([c.existence for c in self.components], dtype=float)

    def expected_cardinality(self) -> float:
        return float(self.existences.sum()) if self.components else 0.0


def labels_distinct(lmb: LmbDensity) -> bool:
    """True iff no two components share a label."""
    labels = lmb.labels
    return len(set(labels)) == len(labels)
