"""Birth prior: uniform position over a region, Gaussian velocity."""

import math
from dataclasses import dataclass

import numpy as np

from src.core.types import ParticleSet


@dataclass(frozen=True, slots=True)
class BirthPrior:
    """Prior on a newborn target's state.

    Attributes:
        region: (xmin, xmax, ymin, ymax) in meters
        velocity_std: Per-axis velocity std in m/s
        num_particles: Importance samples per average pseudolikelihood
    """

    region: tuple[float, float, float, float]
    velocity_std: float = 35.0
    num_particles: int = 1000

    def __post_init__(self) -> None:
        xmin, xmax, ymin, ymax = self.region
        if not (xmin < xmax and ymin < ymax):
            raise ValueError(f"Degenerate birth region: {self.region}")
        if self.num_particles < 1:
            raise ValueError(f"num_particles must be positive, got {self.num_particles}")
        if self.velocity_std < 0:
            raise ValueError(f"velocity_std must be nonnegative, got {self.velocity_std}")

    @property
    def area(self) -> float:
        xmin, xmax, ymin, ymax = self.region
        return (xmax - xmin) * (ymax - ymin)

    @property
    def log_position_density(self) -> float:
        return -math.log(self.area)

    def contains(self, positions: np.ndarray) -> np.ndarray:
        positions = np.asarray(positions, dtype=float).reshape(-1, 2)
        xmin, xmax, ymin, ymax = self.region
        return (
            (positions[:, 0] >= xmin)
            & (positions[:, 0] <= xmax)
            & (positions[:, 1] >= ymin)
            & (positions[:, 1] <= ymax)
        )

    def sample_velocities(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.normal(0.0, self.velocity_std, size=(n, 2))

    def sample_states(self, n: int, rng: np.random.Generator) -> np.ndarray:
        xmin, xmax, ymin, ymax = self.region
        px = rng.uniform(xmin, xmax, size=n)
        py = rng.uniform(ymin, ymax, size=n)
        velocities = self.sample_velocities(n, rng)
        return np.column_stack([px, velocities[:, 0], py, velocities[:, 1]])


def sample_birth_prior(prior: BirthPrior, n: int, rng: np.random.Generator) -> ParticleSet:
    """Draw ``n`` equally weighted particles from the birth prior."""
    if n < 1:
        raise ValueError(f"Sample count must be positive, got {n}")
    return ParticleSet.uniform(prior.sample_states(n, rng))
