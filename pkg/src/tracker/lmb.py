"""Particle LMB filter: prediction, iterated-corrector update, pruning and extraction."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from src.birth.components import prune_cap
from src.birth.gating import AssociationInput
from src.config import FilterConfig
from src.core.errors import ConfigurationError, LabelCollisionError
from src.core.types import BernoulliComponent, KinematicState, Label, LmbDensity, ParticleSet
from src.models.motion import NcvModel, ncv_propagate
from src.models.sensor import BearingRangeSensor, clutter_intensities, likelihood_matrix
from src.tracker.association import Method, association_marginals
from src.utils.sampling import systematic_resample

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SensorUpdateResult:
    """Posterior after one sensor and the per-measurement association probabilities."""

    posterior: LmbDensity
    r_assoc: np.ndarray


def predict(
    lmb: LmbDensity,
    birth: LmbDensity,
    model: NcvModel,
    survival_prob: float,
    rng: np.random.Generator,
) -> LmbDensity:
    """Survive and move existing components, then append the birth components.

    Raises:
        LabelCollisionError: If a birth label is already in use
    """
    collisions = set(lmb.labels) & set(birth.labels)
    if collisions:
        raise LabelCollisionError(f"Birth labels already tracked: {sorted(collisions)[:5]}")

    survived = [
        BernoulliComponent(
            c.label,
            c.existence * survival_prob,
            ParticleSet(ncv_propagate(model, c.spatial.states, rng), c.spatial.weights),
        )
        for c in lmb
    ]
    return LmbDensity(tuple(survived) + birth.components)


def _association_table(
    lmb: LmbDensity, sensor: BearingRangeSensor, z: np.ndarray
) -> tuple[np.ndarray, list[np.ndarray], list[np.ndarray]]:
    """Association weights plus per-track particle terms reused by the posterior.

    Returns:
        ``eta`` of shape ``(n, m + 1)``, per-track miss factors ``(N,)`` and
        per-track detection ratios ``p_D g / kappa`` of shape ``(m, N)``
    """
    m = z.shape[0]
    kappa = clutter_intensities(sensor, z)
    if m and not np.all(kappa > 0):
        raise ConfigurationError(
            f"Sensor {sensor.id}: measurement outside the clutter volume (zero intensity)"
        )

    eta = np.zeros((len(lmb), m + 1))
    miss_terms: list[np.ndarray] = []
    det_terms: list[np.ndarray] = []
    for i, comp in enumerate(lmb):
        spatial = comp.spatial.normalized()
        p_d = sensor.detect_probs(spatial.states)
        miss = 1.0 - p_d
        ratio = (
            p_d[None, :] * likelihood_matrix(sensor, z, spatial.states) / kappa[:, None]
            if m
            else np.zeros((0, len(spatial)))
        )
        r = comp.existence
        eta[i, 0] = 1.0 - r + r * float(miss @ spatial.weights)
        eta[i, 1:] = r * (ratio @ spatial.weights)
        miss_terms.append(miss)
        det_terms.append(ratio)
    return eta, miss_terms, det_terms


def update_sensor(
    lmb: LmbDensity,
    sensor: BearingRangeSensor,
    z: np.ndarray,
    cfg: FilterConfig,
    rng: np.random.Generator,
    method: Method = "auto",
) -> SensorUpdateResult:
    """Single-sensor particle LMB update.

    Marginal association probabilities come from exact event enumeration
    for small clusters and from a Gibbs sampler otherwise. ``r_assoc[j]`` is
    the probability that some track generated measurement ``j``.
    """
    z = np.asarray(z, dtype=float).reshape(-1, 2)
    m = z.shape[0]
    if len(lmb) == 0:
        return SensorUpdateResult(LmbDensity(), np.zeros(m))

    eta, miss_terms, det_terms = _association_table(lmb, sensor, z)
    marginals = association_marginals(eta, cfg.assoc_samples, rng, method=method)

    components: list[BernoulliComponent] = []
    for i, comp in enumerate(lmb):
        spatial = comp.spatial.normalized()
        r = comp.existence
        p_miss = marginals[i, 0]
        p_det = marginals[i, 1:]
        likelihoods = eta[i, 1:] / r if r > 0 else np.zeros(m)

        # P(exists, missed) = p_miss * r * M / eta_0 with M the mean miss probability
        miss_coef = p_miss * r / eta[i, 0] if eta[i, 0] > 0 else 0.0
        existence = miss_coef * float(miss_terms[i] @ spatial.weights) + float(p_det.sum())
        existence = float(np.clip(existence, 0.0, 1.0))

        with np.errstate(divide="ignore", invalid="ignore"):
            det_coef = np.where(likelihoods > 0, p_det / likelihoods, 0.0)
        weights = spatial.weights * (miss_coef * miss_terms[i] + det_coef @ det_terms[i])

        if weights.sum() > 0:
            idx = systematic_resample(weights, cfg.track_particles, rng)
            posterior = ParticleSet.uniform(spatial.states[idx])
        else:
            posterior = spatial
        components.append(BernoulliComponent(comp.label, existence, posterior))

    r_assoc = np.clip(marginals[:, 1:].sum(axis=0), 0.0, 1.0)
    return SensorUpdateResult(LmbDensity(tuple(components)), r_assoc)


def update_all_sensors(
    lmb: LmbDensity,
    sensors: Sequence[BearingRangeSensor],
    measurements: Sequence[np.ndarray],
    cfg: FilterConfig,
    rng: np.random.Generator,
) -> tuple[LmbDensity, AssociationInput]:
    """Iterated corrector: update with each sensor in index order.

    Returns:
        Posterior and the per-sensor association probabilities for birth
    """
    r_assoc: list[np.ndarray] = []
    for sensor, z in zip(sensors, measurements, strict=True):
        result = update_sensor(lmb, sensor, z, cfg, rng)
        lmb = result.posterior
        r_assoc.append(result.r_assoc)
    return lmb, AssociationInput(tuple(r_assoc))


def prune_cap_belief(lmb: LmbDensity, cfg: FilterConfig) -> LmbDensity:
    """Prune and cap the belief with the filter thresholds."""
    return prune_cap(lmb, cfg.belief_prune, cfg.belief_cap)


def extract_estimates(
    lmb: LmbDensity, threshold: float
) -> list[tuple[Label, KinematicState]]:
    """Labeled mean states of components with existence above ``threshold``."""
    return [(c.label, c.spatial.mean()) for c in lmb if c.existence > threshold]
