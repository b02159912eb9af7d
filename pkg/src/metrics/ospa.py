"""OSPA between point sets and OSPA(2) between labeled track sets."""

import logging
import math
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

logger = logging.getLogger(__name__)

Position = tuple[float, float]


@dataclass(frozen=True)
class OspaParams:
    """Cutoff ``c``, order ``p``, sliding window length and window weight power."""

    cutoff: float = 200.0
    order: float = 1.0
    window: int = 5
    weight_power: float = 0.0

    def __post_init__(self) -> None:
        if not self.cutoff > 0:
            raise ValueError(f"OSPA cutoff must be positive, got {self.cutoff}")
        if not self.order >= 1:
            raise ValueError(f"OSPA order must be >= 1, got {self.order}")
        if self.window < 1:
            raise ValueError(f"OSPA window must be >= 1, got {self.window}")


@dataclass
class LabeledTrackSet:
    """Tracks keyed by label, each a map from step to position."""

    tracks: dict[Hashable, dict[int, Position]] = field(default_factory=dict)

    def add(self, label: Hashable, step: int, position: Sequence[float]) -> None:
        self.tracks.setdefault(label, {})[step] = (float(position[0]), float(position[1]))

    def add_step(
        self, step: int, entries: Iterable[tuple[Hashable, Sequence[float]]]
    ) -> None:
        for label, position in entries:
            self.add(label, step, position)

    def __len__(self) -> int:
        return len(self.tracks)

    def window_positions(self, steps: Sequence[int]) -> list[np.ndarray]:
        """Per-track ``(len(steps), 2)`` arrays, NaN where absent.

        Tracks absent on every step are left out.
        """
        out: list[np.ndarray] = []
        for track in self.tracks.values():
            rows = [track.get(step, (math.nan, math.nan)) for step in steps]
            if any(step in track for step in steps):
                out.append(np.array(rows, dtype=float))
        return out


def assignment_min(costs: np.ndarray) -> float:
    """Minimum total cost over injections of the smaller side into the larger."""
    costs = np.asarray(costs, dtype=float)
    if costs.size == 0:
        return 0.0
    rows, cols = linear_sum_assignment(costs)
    return math.fsum(costs[rows, cols].tolist())


def _ospa_from_costs(costs: np.ndarray, c: float, p: float) -> float:
    """OSPA given cutoff base distances ``(m, n)`` between two sets."""
    m, n = costs.shape
    if m == 0 and n == 0:
        return 0.0
    if m > n:
        costs = costs.T
        m, n = n, m
    local = assignment_min(np.minimum(costs, c) ** p)
    return ((local + c**p * (n - m)) / n) ** (1.0 / p)


def ospa(X: np.ndarray, Y: np.ndarray, c: float, p: float) -> float:
    """OSPA distance between two finite sets of positions.

    Args:
        X: ``(m, d)`` points
        Y: ``(n, d)`` points
        c: Cutoff
        p: Order

    Returns:
        Distance in ``[0, c]``; 0 when both sets are empty
    """
    X = np.asarray(X, dtype=float).reshape(-1, 2)
    Y = np.asarray(Y, dtype=float).reshape(-1, 2)
    costs = np.hypot(X[:, None, 0] - Y[None, :, 0], X[:, None, 1] - Y[None, :, 1])
    return _ospa_from_costs(costs.reshape(X.shape[0], Y.shape[0]), c, p)


def window_weights(length: int, power: float) -> np.ndarray:
    """Normalized weights over a window; step i gets ``(i + 1) ** power``."""
    if power == 0:
        return np.full(length, 1.0 / length)
    raw = np.arange(1, length + 1, dtype=float) ** power
    return raw / raw.sum()


def _track_distance(x: np.ndarray, y: np.ndarray, weights: np.ndarray, c: float, p: float) -> float:
    x_on = ~np.isnan(x[:, 0])
    y_on = ~np.isnan(y[:, 0])
    d = np.where(x_on ^ y_on, c, 0.0)
    both = x_on & y_on
    d[both] = np.minimum(c, np.hypot(*(x[both] - y[both]).T))
    return float(weights @ d**p) ** (1.0 / p)


def ospa2(X: LabeledTrackSet, Y: LabeledTrackSet, params: OspaParams, t: int) -> float:
    """OSPA(2) over the window ending at step ``t``.

    Two tracks are compared by the power mean of their per-step cutoff
    distances over the window (0 where neither exists, ``c`` where only one
    does). The result is OSPA between the two track sets under that base
    distance.
    """
    steps = list(range(max(0, t - params.window + 1), t + 1))
    weights = window_weights(len(steps), params.weight_power)
    xs = X.window_positions(steps)
    ys = Y.window_positions(steps)
    c, p = params.cutoff, params.order
    costs = np.array(
        [[_track_distance(x, y, weights, c, p) for y in ys] for x in xs], dtype=float
    ).reshape(len(xs), len(ys))
    return _ospa_from_costs(costs, c, p)


def ospa2_series(
    X: LabeledTrackSet, Y: LabeledTrackSet, params: OspaParams, steps: Iterable[int]
) -> np.ndarray:
    return np.array([ospa2(X, Y, params, t) for t in steps], dtype=float)
