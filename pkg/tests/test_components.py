import numpy as np
import pytest

from src.birth import AssociationInput, EvalStats, PsiEvaluator, construct_birth_lmb, prune_cap
from src.config import BirthConfig
from src.core import BernoulliComponent, Label, LmbDensity, ParticleSet, tuple_missed_count
from src.models import NcvModel

MODEL = NcvModel(1.0, (5.0, 5.0))


def make_lmb(existences: list[float]) -> LmbDensity:
    spatial = ParticleSet.uniform(np.zeros((1, 4)))
    return LmbDensity(
        tuple(BernoulliComponent(Label(1, (i,)), r, spatial) for i, r in enumerate(existences))
    )


def test_prune_cap_drops_small_and_keeps_largest_in_order():
    lmb = make_lmb([0.5, 0.0005, 0.3, 0.3, 0.9])
    out = prune_cap(lmb, 1e-3, 2)
    assert out.existences.tolist() == [0.5, 0.9]


def test_prune_cap_breaks_ties_by_label():
    lmb = make_lmb([0.3, 0.3, 0.3])
    out = prune_cap(lmb, 0.0, 2)
    assert [label.meas_tuple for label in out.labels] == [(0,), (1,)]


def test_prune_cap_neutral_settings_keep_everything():
    lmb = make_lmb([0.0, 0.2, 1.0])
    assert prune_cap(lmb, 0.0, None) == lmb


def test_birth_components_are_labeled_and_bounded(pair_context):
    cfg = BirthConfig(lambda_b=0.5, r_b_max=0.4, posterior_particles=100, max_missed=None)
    evaluator = PsiEvaluator(pair_context, memoize=True)
    tuples = {(0, 0), (1, 1), (1, 0), (0, 1), (2, 2)}
    stats = EvalStats()

    birth = construct_birth_lmb(
        evaluator, AssociationInput.unassociated([2, 2]), tuples, cfg, MODEL, stats
    )

    assert all(label.birth_time == pair_context.timestep + 1 for label in birth.labels)
    assert all(0.0 < r <= 0.4 for r in birth.existences)
    assert birth.expected_cardinality() <= 0.5 + 1e-12
    assert all(len(c.spatial) == 100 for c in birth)
    assert stats.component_skips == 0
    best = max(birth, key=lambda c: c.existence)
    assert best.label.meas_tuple == (1, 1)


def test_birth_skips_tuples_with_too_many_misses(pair_context):
    cfg = BirthConfig(max_missed=1, posterior_particles=50)
    stats = EvalStats()
    birth = construct_birth_lmb(
        PsiEvaluator(pair_context, memoize=False),
        AssociationInput.unassociated([2, 2]),
        {(0, 0), (1, 1), (1, 0)},
        cfg,
        MODEL,
        stats,
    )
    assert stats.component_skips == 1
    assert all(tuple_missed_count(label.meas_tuple) <= 1 for label in birth.labels)


def test_fully_associated_tuples_give_no_births(pair_context):
    assoc = AssociationInput((np.array([1.0, 0.0]), np.array([1.0, 0.0])))
    birth = construct_birth_lmb(
        PsiEvaluator(pair_context, memoize=False), assoc, {(1, 1)}, BirthConfig(), MODEL
    )
    assert len(birth) == 0


def test_birth_spatial_draws_are_tuple_owned(pair_context):
    cfg = BirthConfig(posterior_particles=50)
    assoc = AssociationInput.unassociated([2, 2])
    small = construct_birth_lmb(PsiEvaluator(pair_context, True), assoc, {(1, 1)}, cfg, MODEL)
    large = construct_birth_lmb(
        PsiEvaluator(pair_context, True), assoc, {(1, 1), (1, 0)}, cfg, MODEL
    )
    by_label = {c.label: c for c in large}
    only = small.components[0]
    np.testing.assert_array_equal(by_label[only.label].spatial.states, only.spatial.states)
    assert by_label[only.label].existence < only.existence + 1e-15
    assert only.existence == pytest.approx(0.5)
