"""Multi-short-run Gibbs sampling of multi-sensor measurement tuples."""

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from src.birth.cache import EvalStats, PsiEvaluator
from src.birth.gating import AssociationInput, GateMatrix, gate_check
from src.config import BirthConfig
from src.core.types import MeasurementTuple, tuple_all_miss, tuple_missed_count

logger = logging.getLogger(__name__)


def full_candidates(sizes: Sequence[int]) -> list[np.ndarray]:
    """Every index 0..m per sensor."""
    return [np.arange(m + 1) for m in sizes]


def gibbs_conditional(
    evaluator: PsiEvaluator,
    assoc: AssociationInput,
    gate: GateMatrix | None,
    s: int,
    partial: MeasurementTuple,
    candidates: np.ndarray,
    stats: EvalStats,
) -> tuple[np.ndarray, float]:
    """Unnormalized transition weights for slot ``s`` given the other slots.

    ``weight(j) = (1 - r_A(j)) * psi_bar(partial with slot s = j)``. Gated-out
    candidates get weight 0 without a psi-bar request. If every weight is
    zero, the miss index gets weight 1.

    Returns:
        Weights aligned with ``candidates`` and their sum
    """
    weights = np.zeros(candidates.size)
    prefix, suffix = partial[:s], partial[s + 1:]
    for k, j in enumerate(candidates.tolist()):
        if gate is not None and j > 0 and not gate_check(gate, s, j, partial):
            stats.gated_skips += 1
            continue
        psi_bar = evaluator.psi_bar(prefix + (j,) + suffix)
        weights[k] = (1.0 - assoc.r_a(s, j)) * psi_bar
    total = float(weights.sum())
    if not total > 0:
        weights = (candidates == 0).astype(float)
        total = 1.0
    return weights, total


def gibbs_chain(
    evaluator: PsiEvaluator,
    assoc: AssociationInput,
    candidates: Sequence[np.ndarray],
    gate: GateMatrix | None,
    length: int,
    rng: np.random.Generator,
    stats: EvalStats,
) -> list[MeasurementTuple]:
    """Run one chain from the all-miss tuple.

    Returns:
        The initial state followed by the state after each full sweep
    """
    state = list(tuple_all_miss(len(candidates)))
    trajectory: list[MeasurementTuple] = [tuple(state)]
    for _ in range(length):
        for s, cands in enumerate(candidates):
            if cands.size == 1:
                continue
            weights, total = gibbs_conditional(
                evaluator, assoc, gate, s, tuple(state), cands, stats
            )
            pick = np.searchsorted(np.cumsum(weights), rng.random() * total, side="right")
            state[s] = int(cands[min(pick, cands.size - 1)])
        trajectory.append(tuple(state))
    return trajectory


def run_birth_gibbs(
    evaluator: PsiEvaluator,
    assoc: AssociationInput,
    cfg: BirthConfig,
    rng: np.random.Generator,
    candidates: Sequence[np.ndarray] | None = None,
    gate: GateMatrix | None = None,
    stats: EvalStats | None = None,
) -> set[MeasurementTuple]:
    """Sample birth tuples with independent short chains.

    Each chain gets its own seed drawn from ``rng`` up front, so running the
    chains on ``cfg.workers`` threads yields the same tuple set as running
    them one after another.

    Returns:
        Deduplicated union of every state visited by every chain
    """
    if candidates is None:
        candidates = full_candidates(evaluator.ctx.sizes)
    if stats is None:
        stats = EvalStats()
    seeds = rng.integers(0, 2**63 - 1, size=cfg.num_chains)

    def run_chain(seed: int) -> tuple[list[MeasurementTuple], EvalStats]:
        chain_stats = EvalStats()
        trajectory = gibbs_chain(
            evaluator,
            assoc,
            candidates,
            gate,
            cfg.chain_length,
            np.random.default_rng(seed),
            chain_stats,
        )
        return trajectory, chain_stats

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(run_chain, seeds.tolist()))
    else:
        results = [run_chain(seed) for seed in seeds.tolist()]

    tuples: set[MeasurementTuple] = set()
    for trajectory, chain_stats in results:
        tuples.update(trajectory)
        stats.gated_skips += chain_stats.gated_skips
    logger.debug(
        f"Gibbs at step {evaluator.ctx.timestep}: {cfg.num_chains} chains, "
        f"{len(tuples)} unique tuples"
    )
    return tuples


def should_skip(
    meas_tuple: MeasurementTuple, max_missed: int | None, stats: EvalStats | None = None
) -> bool:
    """True iff the tuple has more misses than allowed."""
    if max_missed is None or tuple_missed_count(meas_tuple) <= max_missed:
        return False
    if stats is not None:
        stats.component_skips += 1
    return True
