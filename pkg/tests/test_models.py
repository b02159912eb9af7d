import math

import numpy as np
import pytest

from src.config import ScenarioConfig
from src.core import DegenerateGeometryError, KinematicState, Measurement
from src.models import (
    BearingRangeSensor,
    BirthPrior,
    NcvModel,
    build_sensors,
    clutter_intensity,
    likelihood,
    measurement_positions,
    ncv_propagate,
    ncv_step,
    observe,
    observe_states,
    sample_birth_prior,
    wrap_angle,
)


@pytest.mark.parametrize(
    "angle,expected",
    [(math.pi, math.pi), (-math.pi, math.pi), (3 * math.pi, math.pi), (0.5, 0.5), (-0.5, -0.5)],
)
def test_wrap_angle(angle, expected):
    assert wrap_angle(angle) == pytest.approx(expected)


def test_observe_bearing_convention():
    sensor = BearingRangeSensor(1, (0.0, 0.0))
    z = observe(sensor, KinematicState(0.0, 0.0, -100.0, 0.0))
    assert z.bearing == pytest.approx(0.0)
    assert z.range == pytest.approx(100.0)


def test_measurement_positions_invert_observation():
    sensor = BearingRangeSensor(1, (2000.0, -500.0))
    states = np.random.default_rng(0).uniform(0, 10000, size=(50, 4))
    positions = measurement_positions(sensor, observe_states(sensor, states))
    np.testing.assert_allclose(positions, states[:, [0, 2]], atol=1e-6)


def test_observe_rejects_target_on_sensor():
    sensor = BearingRangeSensor(1, (10.0, 20.0))
    with pytest.raises(DegenerateGeometryError):
        observe(sensor, KinematicState(10.0, 1.0, 20.0, 1.0))


def test_likelihood_peaks_at_noiseless_observation():
    sensor = BearingRangeSensor(1, (0.0, 0.0))
    x = KinematicState(3000.0, 0.0, 4000.0, 0.0)
    z = observe(sensor, x)
    assert likelihood(sensor, z, x) == pytest.approx(sensor.peak_density)
    off = Measurement(z.bearing, z.range + sensor.range_std)
    assert likelihood(sensor, off, x) == pytest.approx(sensor.peak_density * math.exp(-0.5))


def test_likelihood_wraps_bearing_residual():
    sensor = BearingRangeSensor(1, (0.0, 0.0))
    x = KinematicState(0.0, 0.0, 100.0, 0.0)
    assert observe(sensor, x).bearing == pytest.approx(math.pi)
    z = Measurement(-math.pi + 1e-9, 100.0)
    assert likelihood(sensor, z, x) == pytest.approx(sensor.peak_density)


def test_clutter_intensity_inside_and_outside_volume():
    sensor = BearingRangeSensor(1, (0.0, 0.0), clutter_rate=10.0, range_max=20000.0)
    assert clutter_intensity(sensor, Measurement(0.1, 5.0)) == pytest.approx(
        10.0 / (2 * math.pi * 20000.0)
    )
    assert clutter_intensity(sensor, Measurement(0.1, 25000.0)) == 0.0


def test_sensor_validation():
    with pytest.raises(ValueError):
        BearingRangeSensor(1, (0.0, 0.0), detect_prob=1.5)
    with pytest.raises(ValueError):
        BearingRangeSensor(1, (0.0, 0.0), range_std=0.0)


def test_ncv_without_noise_is_linear():
    model = NcvModel(2.0, (0.0, 0.0))
    out = ncv_propagate(model, np.array([0.0, 1.0, 0.0, 2.0]), np.random.default_rng(0))
    np.testing.assert_allclose(out, [[2.0, 1.0, 4.0, 2.0]])
    x = ncv_step(model, KinematicState(0.0, 1.0, 0.0, 2.0), np.random.default_rng(0))
    assert x == KinematicState(2.0, 1.0, 4.0, 2.0)


def test_ncv_noise_enters_through_gain():
    model = NcvModel(1.0, (5.0, 5.0))
    rng = np.random.default_rng(1)
    out = ncv_propagate(model, np.zeros((20000, 4)), rng)
    # velocity variance dt^2 sigma^2, position variance dt^4 sigma^2 / 4
    assert out[:, 1].var() == pytest.approx(25.0, rel=0.05)
    assert out[:, 0].var() == pytest.approx(25.0 / 4, rel=0.05)


def test_birth_prior_samples_inside_region():
    prior = BirthPrior((0.0, 100.0, 0.0, 50.0), velocity_std=3.0, num_particles=10)
    assert prior.area == 5000.0
    ps = sample_birth_prior(prior, 1000, np.random.default_rng(2))
    assert prior.contains(ps.positions()).all()
    assert ps.is_normalized


def test_build_sensors_uses_one_based_ids():
    sensors = build_sensors(ScenarioConfig().resolved_sensors())
    assert [s.id for s in sensors] == list(range(1, 9))
    assert sensors[0].position == (0.0, 0.0)
    assert sensors[4].position == (10000.0, 10000.0)


def test_no_detection_beyond_observation_volume():
    sensor = BearingRangeSensor(1, (0.0, 0.0), detect_prob=0.9, range_max=1000.0)
    states = np.array([[600.0, 0.0, 800.0, 0.0], [0.0, 0.0, 1000.5, 0.0]])
    np.testing.assert_array_equal(sensor.detect_probs(states), [0.9, 0.0])
