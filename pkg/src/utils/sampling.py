"""Resampling helpers for particle sets."""

import numpy as np

from src.core.errors import NormalizationError


def systematic_resample(weights: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """Indices of ``n`` systematically resampled particles.

    Raises:
        NormalizationError: If the weights sum to zero
    """
    weights = np.asarray(weights, dtype=float)
    total = weights.sum()
    if not total > 0:
        raise NormalizationError("Cannot resample from zero total weight")
    cumulative = np.cumsum(weights / total)
    cumulative[-1] = 1.0
    positions = (rng.random() + np.arange(n)) / n
    return np.searchsorted(cumulative, positions, side="right").clip(max=weights.size - 1)
