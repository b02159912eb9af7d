"""Per-sensor, joint and average measurement pseudolikelihoods.

The average pseudolikelihood of a measurement tuple is estimated by
importance sampling. Its random stream is derived from
``(base_seed, timestep, tuple)`` only, so the estimate is a pure function of
the tuple within a timestep and caching it never changes any result.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from src.core.errors import ConfigurationError, NormalizationError
from src.core.types import KinematicState, MeasurementTuple, ParticleSet, tuple_is_valid
from src.models.motion import NcvModel, ncv_propagate
from src.models.prior import BirthPrior
from src.models.sensor import BearingRangeSensor, clutter_intensities, log_likelihood_matrix
from src.utils.rng import Stream, substream
from src.utils.sampling import systematic_resample

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PsiContext:
    """Everything a pseudolikelihood evaluation depends on at one timestep.

    Attributes:
        sensors: Sensors in index order
        measurements: Per-sensor ``(m, 2)`` arrays of (bearing, range)
        prior: Birth prior p_B
        timestep: Current timestep k
        base_seed: Root seed of the psi-bar streams
        stream_key: Extra key separating sub-contexts (sensor-pair gates)
    """

    sensors: tuple[BearingRangeSensor, ...]
    measurements: tuple[np.ndarray, ...]
    prior: BirthPrior
    timestep: int
    base_seed: int
    stream_key: tuple[int, ...] = ()
    kappa: tuple[np.ndarray, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        sensors = tuple(self.sensors)
        measurements = tuple(np.asarray(z, dtype=float).reshape(-1, 2) for z in self.measurements)
        if len(sensors) != len(measurements):
            raise ConfigurationError(
                f"{len(sensors)} sensors but {len(measurements)} measurement sets"
            )
        object.__setattr__(self, "sensors", sensors)
        object.__setattr__(self, "measurements", measurements)
        object.__setattr__(
            self,
            "kappa",
            tuple(clutter_intensities(s, z) for s, z in zip(sensors, measurements, strict=True)),
        )

    @property
    def num_sensors(self) -> int:
        return len(self.sensors)

    @property
    def sizes(self) -> list[int]:
        return [z.shape[0] for z in self.measurements]

    def subcontext(self, indices: Sequence[int]) -> "PsiContext":
        """Context restricted to the given sensors (0-based positions)."""
        return PsiContext(
            sensors=tuple(self.sensors[i] for i in indices),
            measurements=tuple(self.measurements[i] for i in indices),
            prior=self.prior,
            timestep=self.timestep,
            base_seed=self.base_seed,
            stream_key=tuple(self.sensors[i].id for i in indices),
        )

    def clutter_at(self, s: int, j: int) -> float:
        """Clutter intensity of measurement ``j`` (1-based) of sensor ``s``.

        Raises:
            ConfigurationError: If the intensity is not positive
        """
        kappa = float(self.kappa[s][j - 1])
        if not kappa > 0:
            raise ConfigurationError(
                f"Clutter intensity of sensor {self.sensors[s].id} is zero at measurement {j}; "
                "the clutter density must be positive on the observation volume"
            )
        return kappa


@dataclass(frozen=True)
class PsiResult:
    """Average pseudolikelihood and the importance-weighted particles behind it."""

    psi_bar: float
    particles: ParticleSet

    @property
    def degenerate(self) -> bool:
        return self.particles.degenerate


def _check_tuple(ctx: PsiContext, meas_tuple: MeasurementTuple) -> None:
    if not tuple_is_valid(meas_tuple, ctx.sizes):
        raise ValueError(f"Tuple {meas_tuple} invalid for measurement set sizes {ctx.sizes}")


def log_joint_psi(
    ctx: PsiContext,
    meas_tuple: MeasurementTuple,
    states: np.ndarray,
    skip: int | None = None,
) -> np.ndarray:
    """Log of the joint pseudolikelihood for each of ``(N, 4)`` states.

    Args:
        ctx: Pseudolikelihood context
        meas_tuple: Measurement tuple
        states: States to evaluate
        skip: Sensor position whose factor is left out

    Returns:
        ``(N,)`` log values; ``-inf`` where a factor is zero
    """
    states = np.asarray(states, dtype=float).reshape(-1, 4)
    total = np.zeros(states.shape[0])
    with np.errstate(divide="ignore"):
        for s, j in enumerate(meas_tuple):
            if s == skip:
                continue
            sensor = ctx.sensors[s]
            p_d = sensor.detect_probs(states)
            if j == 0:
                total += np.log1p(-p_d)
            else:
                kappa = ctx.clutter_at(s, j)
                z = ctx.measurements[s][j - 1]
                total += np.log(p_d) + log_likelihood_matrix(sensor, z, states)[0] - math.log(kappa)
    return total


def per_sensor_psi(ctx: PsiContext, s: int, j: int, x: KinematicState) -> float:
    """Per-sensor pseudolikelihood: p_D g / kappa for a detection, 1 - p_D for a miss.

    Args:
        ctx: Pseudolikelihood context
        s: Sensor position (0-based) in ``ctx.sensors``
        j: Measurement index (0 = miss)
        x: State

    Raises:
        ConfigurationError: If the clutter intensity at a real measurement is zero
    """
    if not 0 <= j <= ctx.sizes[s]:
        raise ValueError(f"Index {j} invalid for sensor {ctx.sensors[s].id} ({ctx.sizes[s]} meas)")
    sensor = ctx.sensors[s]
    state = x.to_array()[None, :]
    p_d = float(sensor.detect_probs(state)[0])
    if j == 0:
        return 1.0 - p_d
    kappa = ctx.clutter_at(s, j)
    g = float(np.exp(log_likelihood_matrix(sensor, ctx.measurements[s][j - 1], state)[0, 0]))
    return p_d * g / kappa


def joint_psi(ctx: PsiContext, meas_tuple: MeasurementTuple, x: KinematicState) -> float:
    """Product of the per-sensor pseudolikelihoods, accumulated in the log domain."""
    _check_tuple(ctx, meas_tuple)
    return float(np.exp(log_joint_psi(ctx, meas_tuple, x.to_array())[0]))


def psi_stream(ctx: PsiContext, meas_tuple: MeasurementTuple) -> np.random.Generator:
    """Random stream owned by one tuple at one timestep.

    The key carries the length of ``ctx.stream_key`` so a sensor-pair
    sub-context never shares a stream with a longer full-context tuple.
    """
    keys = (ctx.timestep, len(ctx.stream_key), *ctx.stream_key, *meas_tuple)
    return substream(ctx.base_seed, Stream.PSI, *keys)


def estimate_psi(ctx: PsiContext, meas_tuple: MeasurementTuple) -> PsiResult:
    """Importance-sampling estimate of the average pseudolikelihood of a tuple.

    The all-miss tuple samples from the birth prior. Any other tuple samples
    from the measurement-noise model of its first detecting sensor, inverted
    to position, with velocity from the prior velocity law; the polar to
    Cartesian Jacobian contributes the range factor of the weight.

    Returns:
        PsiResult whose particles carry unnormalized importance weights
    """
    _check_tuple(ctx, meas_tuple)
    prior = ctx.prior
    n = prior.num_particles
    rng = psi_stream(ctx, meas_tuple)
    detecting = [s for s, j in enumerate(meas_tuple) if j > 0]

    if not detecting:
        states = prior.sample_states(n, rng)
        log_w = log_joint_psi(ctx, meas_tuple, states)
    else:
        s_star = detecting[0]
        j_star = meas_tuple[s_star]
        sensor = ctx.sensors[s_star]
        kappa = ctx.clutter_at(s_star, j_star)
        bearing_z, range_z = ctx.measurements[s_star][j_star - 1]

        bearings = bearing_z + sensor.bearing_std * rng.standard_normal(n)
        ranges = range_z + sensor.range_std * rng.standard_normal(n)
        velocities = prior.sample_velocities(n, rng)
        px = sensor.position[0] - ranges * np.sin(bearings)
        py = sensor.position[1] - ranges * np.cos(bearings)
        states = np.column_stack([px, velocities[:, 0], py, velocities[:, 1]])

        valid = (ranges > 0) & prior.contains(np.column_stack([px, py]))
        with np.errstate(divide="ignore", invalid="ignore"):
            log_w = (
                prior.log_position_density
                + np.log(np.where(valid, ranges, 0.0))
                + np.log(sensor.detect_probs(states))
                - math.log(kappa)
                + log_joint_psi(ctx, meas_tuple, states, skip=s_star)
            )

    weights = np.exp(log_w)
    weights[~np.isfinite(weights)] = 0.0
    psi_bar = float(weights.mean())
    degenerate = not psi_bar > 0
    if degenerate:
        logger.debug(f"Degenerate psi-bar for tuple {meas_tuple} at step {ctx.timestep}")
    return PsiResult(psi_bar, ParticleSet(states, weights, degenerate=degenerate))


def spatial_posterior(result: PsiResult, n_out: int, rng: np.random.Generator) -> ParticleSet:
    """Resample the importance-weighted particles to an equally weighted set.

    Raises:
        NormalizationError: If ``psi_bar`` is zero
    """
    if not result.psi_bar > 0:
        raise NormalizationError("Cannot build a spatial posterior from a zero psi-bar")
    idx = systematic_resample(result.particles.weights, n_out, rng)
    return ParticleSet.uniform(result.particles.states[idx])


def predict_birth_spatial(
    model: NcvModel, particles: ParticleSet, rng: np.random.Generator
) -> ParticleSet:
    """Push a birth spatial density through one NCV transition; weights unchanged."""
    return ParticleSet(ncv_propagate(model, particles.states, rng), particles.weights)
