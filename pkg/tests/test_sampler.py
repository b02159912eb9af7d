import itertools
from collections import Counter
from types import SimpleNamespace

import numpy as np
import pytest

from src.birth import AssociationInput, EvalStats, GateMatrix, gibbs_chain, run_birth_gibbs
from src.birth.sampler import full_candidates, should_skip
from src.config import BirthConfig


class TableEvaluator:
    """Deterministic psi-bar oracle backed by a lookup table."""

    def __init__(self, table: dict[tuple[int, ...], float], sizes: list[int]):
        self.table = table
        self.ctx = SimpleNamespace(sizes=sizes, timestep=0)
        self.requests = 0

    def psi_bar(self, meas_tuple: tuple[int, ...]) -> float:
        self.requests += 1
        return self.table.get(meas_tuple, 0.0)


def target_distribution(table, assoc):
    weights = {t: assoc.r_unassoc(t) * psi for t, psi in table.items()}
    total = sum(weights.values())
    return {t: w / total for t, w in weights.items()}


@pytest.mark.parametrize("sizes", [[3], [2, 2]])
def test_gibbs_chain_targets_the_tuple_distribution(sizes):
    rng = np.random.default_rng(42)
    tuples = list(itertools.product(*(range(m + 1) for m in sizes)))
    table = {t: float(v) for t, v in zip(tuples, rng.uniform(0.2, 3.0, len(tuples)), strict=True)}
    assoc = AssociationInput(tuple(np.linspace(0.0, 0.4, m) for m in sizes))
    evaluator = TableEvaluator(table, sizes)

    trajectory = gibbs_chain(
        evaluator, assoc, full_candidates(sizes), None, 20000, np.random.default_rng(0), EvalStats()
    )

    counts = Counter(trajectory)
    exact = target_distribution(table, assoc)
    tv = 0.5 * sum(abs(counts[t] / len(trajectory) - p) for t, p in exact.items())
    assert tv < 0.05


def test_chain_records_initial_state_and_each_sweep():
    evaluator = TableEvaluator({(0, 0): 1.0, (1, 0): 1.0, (0, 1): 1.0, (1, 1): 1.0}, [1, 1])
    trajectory = gibbs_chain(
        evaluator,
        AssociationInput.unassociated([1, 1]),
        full_candidates([1, 1]),
        None,
        5,
        np.random.default_rng(1),
        EvalStats(),
    )
    assert len(trajectory) == 6
    assert trajectory[0] == (0, 0)


def test_all_zero_conditional_falls_back_to_miss():
    evaluator = TableEvaluator({}, [2])
    trajectory = gibbs_chain(
        evaluator,
        AssociationInput.unassociated([2]),
        full_candidates([2]),
        None,
        3,
        np.random.default_rng(0),
        EvalStats(),
    )
    assert set(trajectory) == {(0,)}


def test_gated_pairs_are_never_visited_or_evaluated():
    table = {t: 1.0 for t in itertools.product(range(2), range(2))}
    gate = GateMatrix(2, {(0, 1): np.array([[False]])})
    evaluator = TableEvaluator(table, [1, 1])
    stats = EvalStats()
    trajectory = gibbs_chain(
        evaluator,
        AssociationInput.unassociated([1, 1]),
        full_candidates([1, 1]),
        gate,
        200,
        np.random.default_rng(3),
        stats,
    )
    assert (1, 1) not in trajectory
    assert stats.gated_skips > 0


def test_single_candidate_slots_are_not_resampled():
    evaluator = TableEvaluator({(0, 0): 1.0, (0, 1): 2.0}, [3, 1])
    candidates = [np.array([0]), np.array([0, 1])]
    trajectory = gibbs_chain(
        evaluator,
        AssociationInput.unassociated([3, 1]),
        candidates,
        None,
        10,
        np.random.default_rng(0),
        EvalStats(),
    )
    assert all(t[0] == 0 for t in trajectory)
    assert evaluator.requests == 20


def test_threaded_chains_match_serial_chains():
    sizes = [2, 2, 1]
    tuples = itertools.product(*(range(m + 1) for m in sizes))
    table = {t: 1.0 + sum(t) for t in tuples}
    assoc = AssociationInput.unassociated(sizes)

    serial = run_birth_gibbs(
        TableEvaluator(table, sizes), assoc, BirthConfig(num_chains=8, workers=1),
        np.random.default_rng(9),
    )
    threaded = run_birth_gibbs(
        TableEvaluator(table, sizes), assoc, BirthConfig(num_chains=8, workers=4),
        np.random.default_rng(9),
    )
    assert serial == threaded
    assert (0, 0, 0) in serial


def test_should_skip_counts_skips():
    stats = EvalStats()
    assert should_skip((0, 0, 1), 1, stats)
    assert not should_skip((0, 1, 1), 1, stats)
    assert not should_skip((0, 0, 0), None, stats)
    assert stats.component_skips == 1
