"""Marginal track-to-measurement association probabilities for one sensor.

The association weight table ``eta`` has one row per track and one column
per outcome: column 0 is "no measurement" (missed or nonexistent), column
``j`` is "generated measurement j". An association event gives every track
one column with no measurement used twice; its weight is the product of the
chosen entries.
"""

import logging
from typing import Literal

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.special import logsumexp

logger = logging.getLogger(__name__)

ENUMERATION_LIMIT = 6

Method = Literal["auto", "enumerate", "gibbs"]


def _miss_only(n: int, cols: int) -> np.ndarray:
    marginals = np.zeros((n, cols))
    marginals[:, 0] = 1.0
    return marginals


def enumerate_marginals(eta: np.ndarray) -> np.ndarray:
    """Exact marginals by visiting every association event."""
    n, cols = eta.shape
    marginals = np.zeros((n, cols))
    assignment = [0] * n
    total = 0.0

    def visit(i: int, used: frozenset[int], weight: float) -> None:
        nonlocal total
        if weight == 0.0:
            return
        if i == n:
            total += weight
            for track, j in enumerate(assignment):
                marginals[track, j] += weight
            return
        for j in range(cols):
            if j > 0 and j in used:
                continue
            assignment[i] = j
            visit(i + 1, used | {j} if j else used, weight * eta[i, j])

    visit(0, frozenset(), 1.0)
    if not total > 0:
        return _miss_only(n, cols)
    return marginals / total


def gibbs_marginals(eta: np.ndarray, samples: int, rng: np.random.Generator) -> np.ndarray:
    """Marginals over the distinct events visited by a Gibbs sampler.

    The chain starts from the all-miss event and resamples one track at a
    time with weights ``eta[i]`` restricted to measurements not held by
    other tracks.
    """
    n, cols = eta.shape
    state = np.zeros(n, dtype=int)
    seen: set[tuple[int, ...]] = {tuple(state.tolist())}
    for _ in range(samples):
        for i in range(n):
            weights = eta[i].copy()
            others = np.delete(state, i)
            weights[others[others > 0]] = 0.0
            total = weights.sum()
            if not total > 0:
                state[i] = 0
                continue
            pick = np.searchsorted(np.cumsum(weights), rng.random() * total, side="right")
            state[i] = min(int(pick), cols - 1)
        seen.add(tuple(state.tolist()))

    events = np.array(sorted(seen), dtype=int)
    with np.errstate(divide="ignore"):
        log_eta = np.log(eta)
    log_w = log_eta[np.arange(n)[None, :], events].sum(axis=1)
    if not np.isfinite(log_w).any():
        return _miss_only(n, cols)
    weights = np.exp(log_w - logsumexp(log_w))
    marginals = np.zeros((n, cols))
    rows = np.tile(np.arange(n), len(events))
    np.add.at(marginals, (rows, events.ravel()), np.repeat(weights, n))
    return marginals


def association_marginals(
    eta: np.ndarray,
    samples: int,
    rng: np.random.Generator,
    method: Method = "auto",
) -> np.ndarray:
    """Marginal probability of every (track, outcome) pair.

    Tracks and measurements are split into independent clusters (connected
    through nonzero weights). ``auto`` enumerates clusters with at most
    ``ENUMERATION_LIMIT`` tracks and measurements and samples the others.

    Args:
        eta: ``(n, m + 1)`` nonnegative association weights
        samples: Gibbs sweeps per sampled cluster
        rng: Random source for sampled clusters
        method: ``auto``, ``enumerate`` or ``gibbs``

    Returns:
        ``(n, m + 1)`` marginals; rows sum to one
    """
    eta = np.asarray(eta, dtype=float)
    n, cols = eta.shape
    m = cols - 1
    marginals = _miss_only(n, cols)
    if n == 0 or m == 0:
        return marginals

    rows, meas = np.nonzero(eta[:, 1:] > 0)
    graph = coo_matrix(
        (np.ones(rows.size), (rows, n + meas)), shape=(n + m, n + m)
    )
    _, labels = connected_components(graph, directed=False)

    for cluster in np.unique(labels[:n]):
        tracks = np.flatnonzero(labels[:n] == cluster)
        measurements = np.flatnonzero(labels[n:] == cluster)
        if measurements.size == 0:
            continue
        columns = np.concatenate([[0], measurements + 1])
        sub = eta[np.ix_(tracks, columns)]
        small = tracks.size <= ENUMERATION_LIMIT and measurements.size <= ENUMERATION_LIMIT
        if method == "enumerate" or (method == "auto" and small):
            sub_marginals = enumerate_marginals(sub)
        else:
            sub_marginals = gibbs_marginals(sub, samples, rng)
        marginals[np.ix_(tracks, columns)] = sub_marginals
    return marginals
