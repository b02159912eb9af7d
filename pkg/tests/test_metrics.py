import itertools

import numpy as np
import pytest

from src.metrics import LabeledTrackSet, OspaParams, assignment_min, ospa, ospa2, window_weights


def brute_force_min(costs: np.ndarray) -> float:
    rows, cols = costs.shape
    if rows > cols:
        costs, rows, cols = costs.T, cols, rows
    perms = np.array(list(itertools.permutations(range(cols), rows)))
    return float(costs[np.arange(rows), perms].sum(axis=1).min())


def test_ospa_reference_values():
    empty = np.empty((0, 2))
    assert ospa(empty, empty, 200.0, 1.0) == 0.0
    assert ospa(empty, np.zeros((3, 2)), 200.0, 1.0) == 200.0
    assert ospa(np.array([[0.0, 0.0]]), np.array([[3.0, 4.0]]), 200.0, 1.0) == pytest.approx(5.0)


def test_ospa_cutoff_and_cardinality_mix():
    X = np.array([[0.0, 0.0]])
    Y = np.array([[0.0, 1000.0], [30.0, 40.0]])
    assert ospa(X, Y, 200.0, 1.0) == pytest.approx((50.0 + 200.0) / 2)


def test_assignment_min_small_cases():
    assert assignment_min(np.array([[7.0]])) == 7.0
    assert assignment_min(np.array([[1.0, 10.0], [10.0, 1.0]])) == 2.0
    assert assignment_min(np.empty((0, 3))) == 0.0


@pytest.mark.parametrize("size", [5, 6])
def test_assignment_min_matches_permutation_search(size):
    rng = np.random.default_rng(size)
    for _ in range(500):
        costs = rng.uniform(0.0, 100.0, size=(size, size))
        assert assignment_min(costs) == pytest.approx(brute_force_min(costs), rel=1e-12)


def test_assignment_min_rectangular():
    rng = np.random.default_rng(0)
    for shape in [(3, 5), (5, 2)]:
        costs = rng.uniform(0.0, 10.0, size=shape)
        assert assignment_min(costs) == pytest.approx(brute_force_min(costs), rel=1e-12)


def test_ospa_axioms_on_random_sets():
    rng = np.random.default_rng(1)
    for _ in range(200):
        X = rng.uniform(0, 500, size=(rng.integers(0, 6), 2))
        Y = rng.uniform(0, 500, size=(rng.integers(0, 6), 2))
        forward = ospa(X, Y, 200.0, 1.0)
        assert forward == ospa(Y, X, 200.0, 1.0)
        assert 0.0 <= forward <= 200.0
        assert ospa(X, X, 200.0, 2.0) == 0.0


def track_set(tracks: dict) -> LabeledTrackSet:
    out = LabeledTrackSet()
    for label, positions in tracks.items():
        for step, position in positions.items():
            out.add(label, step, position)
    return out


def test_ospa2_identical_sets():
    X = track_set({"a": {t: (10.0 * t, 0.0) for t in range(6)}, "b": {2: (5.0, 5.0)}})
    assert ospa2(X, X, OspaParams(), 5) == 0.0


def test_ospa2_track_against_nothing():
    X = track_set({"a": {t: (0.0, 0.0) for t in range(5)}})
    assert ospa2(X, LabeledTrackSet(), OspaParams(), 4) == 200.0


def test_ospa2_windowed_base_distance():
    X = track_set({"a": {t: (0.0, 0.0) for t in range(5)}})
    Y = track_set({1: {t: (0.0, 0.0) for t in range(4)}})
    assert ospa2(X, Y, OspaParams(), 4) == pytest.approx(40.0)
    assert ospa2(Y, X, OspaParams(), 4) == pytest.approx(40.0)


def test_ospa2_drops_tracks_absent_from_window():
    X = track_set({"old": {0: (0.0, 0.0)}, "now": {t: (0.0, 0.0) for t in range(6, 10)}})
    Y = track_set({"x": {t: (0.0, 0.0) for t in range(6, 10)}})
    assert ospa2(X, Y, OspaParams(window=3), 9) == 0.0


def test_ospa2_window_one_is_per_step_ospa():
    rng = np.random.default_rng(4)
    X = track_set({i: {3: tuple(rng.uniform(0, 300, 2))} for i in range(4)})
    Y = track_set({i: {3: tuple(rng.uniform(0, 300, 2))} for i in range(3)})
    expected = ospa(
        np.array([track[3] for track in X.tracks.values()]),
        np.array([track[3] for track in Y.tracks.values()]),
        200.0,
        1.0,
    )
    assert ospa2(X, Y, OspaParams(window=1), 3) == pytest.approx(expected)


def test_window_weights():
    np.testing.assert_allclose(window_weights(4, 0), [0.25] * 4)
    np.testing.assert_allclose(window_weights(2, 1), [1 / 3, 2 / 3])


def test_params_validation():
    with pytest.raises(ValueError):
        OspaParams(order=0.5)
    with pytest.raises(ValueError):
        OspaParams(cutoff=0.0)
