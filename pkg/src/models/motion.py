"""Nearly constant velocity motion model."""

from dataclasses import dataclass

import numpy as np

from src.core.types import KinematicState


@dataclass(frozen=True, slots=True)
class NcvModel:
    """Discrete white-acceleration NCV model, applied independently per axis.

    Attributes:
        dt: Sampling interval in seconds
        accel_noise_std: Acceleration noise std (wx, wy) in m/s^2
    """

    dt: float
    accel_noise_std: tuple[float, float] = (5.0, 5.0)

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if min(self.accel_noise_std) < 0:
            raise ValueError(f"Noise std must be nonnegative, got {self.accel_noise_std}")

    @property
    def axis_transition(self) -> np.ndarray:
        """F for one axis."""
        return np.array([[1.0, self.dt], [0.0, 1.0]])

    @property
    def axis_gain(self) -> np.ndarray:
        """G for one axis."""
        return np.array([self.dt**2 / 2.0, self.dt])

    @property
    def transition_matrix(self) -> np.ndarray:
        """I2 kron F over [px, vx, py, vy]."""
        return np.kron(np.eye(2), self.axis_transition)

    @property
    def noise_gain(self) -> np.ndarray:
        """I2 kron G, mapping (wx, wy) onto the state."""
        return np.kron(np.eye(2), self.axis_gain.reshape(2, 1))


def ncv_propagate(model: NcvModel, states: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Advance an ``(N, 4)`` array of states one step with sampled process noise."""
    states = np.asarray(states, dtype=float).reshape(-1, 4)
    noise = rng.normal(0.0, 1.0, size=(states.shape[0], 2)) * np.asarray(model.accel_noise_std)
    return states @ model.transition_matrix.T + noise @ model.noise_gain.T


def ncv_step(model: NcvModel, x: KinematicState, rng: np.random.Generator) -> KinematicState:
    """Advance one state one step with sampled process noise."""
    return KinematicState.from_array(ncv_propagate(model, x.to_array()[None, :], rng)[0])
