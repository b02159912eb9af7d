import math

import numpy as np
import pytest

from src.birth import PsiContext, estimate_psi, joint_psi, per_sensor_psi, spatial_posterior
from src.birth.likelihood import PsiResult, psi_stream
from src.core import ConfigurationError, KinematicState, NormalizationError, ParticleSet
from src.models import BearingRangeSensor, BirthPrior, observe_states


def empty_context(num_sensors: int, prior: BirthPrior, detect_prob: float = 0.95) -> PsiContext:
    sensors = tuple(
        BearingRangeSensor(i + 1, (1000.0 * i, 0.0), detect_prob=detect_prob)
        for i in range(num_sensors)
    )
    return PsiContext(sensors, tuple(np.empty((0, 2)) for _ in sensors), prior, 0, 5)


@pytest.mark.parametrize("num_sensors", range(1, 9))
def test_all_miss_psi_bar_is_miss_probability_power(prior, num_sensors):
    ctx = empty_context(num_sensors, prior)
    result = estimate_psi(ctx, (0,) * num_sensors)
    assert result.psi_bar == pytest.approx(0.05**num_sensors, rel=1e-12)


def test_eight_sensor_all_miss_value(prior):
    result = estimate_psi(empty_context(8, prior), (0,) * 8)
    assert result.psi_bar == pytest.approx(3.90625e-11, rel=1e-12)


def test_single_detection_psi_bar_matches_range_jacobian(prior):
    sensor = BearingRangeSensor(1, (0.0, 0.0))
    target = np.array([[5000.0, 0.0, 5000.0, 0.0]])
    z = observe_states(sensor, target)
    ctx = PsiContext((sensor,), (z,), prior, 0, 3)
    kappa = sensor.clutter_rate / (2 * math.pi * sensor.range_max)
    expected = math.hypot(5000.0, 5000.0) * sensor.detect_prob / (kappa * prior.area)
    assert estimate_psi(ctx, (1,)).psi_bar == pytest.approx(expected, rel=0.05)


def test_estimate_is_a_pure_function_of_the_tuple(pair_context):
    first = estimate_psi(pair_context, (1, 1))
    estimate_psi(pair_context, (2, 0))
    again = estimate_psi(pair_context, (1, 1))
    assert first.psi_bar == again.psi_bar
    np.testing.assert_array_equal(first.particles.states, again.particles.states)


def test_consistent_pair_outscores_inconsistent_pair(pair_context):
    consistent = estimate_psi(pair_context, (1, 1)).psi_bar
    mixed = estimate_psi(pair_context, (1, 2)).psi_bar
    assert consistent > 100 * mixed


def test_invalid_tuple_rejected(pair_context):
    with pytest.raises(ValueError):
        estimate_psi(pair_context, (3, 0))


def test_per_sensor_and_joint_psi(pair_context, target):
    x = KinematicState.from_array(target[0])
    miss = per_sensor_psi(pair_context, 0, 0, x)
    detect = per_sensor_psi(pair_context, 1, 1, x)
    assert miss == pytest.approx(0.05)
    sensor = pair_context.sensors[1]
    assert detect == pytest.approx(
        sensor.detect_prob * sensor.peak_density / pair_context.clutter_at(1, 1)
    )
    assert joint_psi(pair_context, (0, 1), x) == pytest.approx(miss * detect)


def test_zero_clutter_detection_is_a_configuration_error(prior):
    sensor = BearingRangeSensor(1, (0.0, 0.0), clutter_rate=0.0)
    ctx = PsiContext((sensor,), (np.array([[0.3, 500.0]]),), prior, 0, 1)
    with pytest.raises(ConfigurationError):
        estimate_psi(ctx, (1,))


def test_spatial_posterior_concentrates_on_target(pair_context, target):
    result = estimate_psi(pair_context, (1, 1))
    posterior = spatial_posterior(result, 300, np.random.default_rng(0))
    assert len(posterior) == 300
    assert posterior.is_normalized
    mean = posterior.mean()
    assert math.hypot(mean.px - target[0, 0], mean.py - target[0, 2]) < 300.0


def test_spatial_posterior_of_zero_estimate_fails():
    result = PsiResult(0.0, ParticleSet(np.zeros((2, 4)), np.zeros(2), degenerate=True))
    assert result.degenerate
    with pytest.raises(NormalizationError):
        spatial_posterior(result, 10, np.random.default_rng(0))


def test_subcontext_streams_differ_from_full_context(pair_context):
    sub = pair_context.subcontext((0,))
    assert sub.stream_key == (1,)
    assert sub.sizes == [2]


def test_pair_gate_streams_never_alias_longer_tuples(pair_context):
    pair = pair_context.subcontext((0, 1))
    wide = PsiContext(
        pair_context.sensors * 2,
        pair_context.measurements * 2,
        pair_context.prior,
        timestep=pair_context.timestep,
        base_seed=pair_context.base_seed,
    )
    pair_draws = psi_stream(pair, (1, 1)).random(4)
    wide_draws = psi_stream(wide, (1, 2, 1, 1)).random(4)
    assert not np.array_equal(pair_draws, wide_draws)
