"""Associated-measurement pre-pruning and pairwise measurement gating."""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.stats import chi2

from src.birth.cache import EvalStats
from src.birth.likelihood import PsiContext, estimate_psi
from src.config import BirthConfig
from src.core.types import MeasurementTuple
from src.models.sensor import measurement_positions, observe_states, wrap_angle

logger = logging.getLogger(__name__)

MEASUREMENT_DIM = 2


@dataclass(frozen=True)
class AssociationInput:
    """Per-sensor association probabilities r_A, one per measurement.

    The miss index has r_A = 0 by definition.
    """

    r_assoc: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        arrays = tuple(
            np.clip(np.asarray(r, dtype=float).reshape(-1), 0.0, 1.0) for r in self.r_assoc
        )
        object.__setattr__(self, "r_assoc", arrays)

    @classmethod
    def unassociated(cls, sizes: Sequence[int]) -> "AssociationInput":
        """All r_A zero (no existing tracks)."""
        return cls(tuple(np.zeros(m) for m in sizes))

    @property
    def sizes(self) -> list[int]:
        return [r.size for r in self.r_assoc]

    def r_a(self, s: int, j: int) -> float:
        """r_A of index ``j`` (1-based, 0 = miss) at sensor position ``s``."""
        return 0.0 if j == 0 else float(self.r_assoc[s][j - 1])

    def r_unassoc(self, meas_tuple: MeasurementTuple) -> float:
        """Product of (1 - r_A) over the tuple's detections."""
        value = 1.0
        for s, j in enumerate(meas_tuple):
            if j > 0:
                value *= 1.0 - float(self.r_assoc[s][j - 1])
        return value


def preprune(
    assoc: AssociationInput, tau_assoc: float, stats: EvalStats | None = None
) -> list[np.ndarray]:
    """Per-sensor candidate indices surviving the association threshold.

    Index ``j`` survives iff r_A(j) <= tau_assoc; the miss index always does.
    """
    survivors: list[np.ndarray] = []
    removed = 0
    for r in assoc.r_assoc:
        keep = np.flatnonzero(r <= tau_assoc) + 1
        removed += r.size - keep.size
        survivors.append(np.concatenate([[0], keep]).astype(int))
    if stats is not None:
        stats.preprune_removed += removed
    return survivors


@dataclass
class GateMatrix:
    """Pairwise feasibility of detections across sensors.

    ``passes[(a, b)]`` is an ``(m_a, m_b)`` boolean array for ``a < b``
    (0-based sensor positions, 0-based measurement rows).
    """

    num_sensors: int
    passes: dict[tuple[int, int], np.ndarray] = field(default_factory=dict)

    def check(self, a: int, j_a: int, b: int, j_b: int) -> bool:
        """Pair feasibility; any pair involving a miss passes."""
        if j_a == 0 or j_b == 0 or a == b:
            return True
        if a > b:
            a, j_a, b, j_b = b, j_b, a, j_a
        return bool(self.passes[(a, b)][j_a - 1, j_b - 1])

    @property
    def pass_fraction(self) -> float:
        total = sum(m.size for m in self.passes.values())
        return float(sum(m.sum() for m in self.passes.values()) / total) if total else 1.0


def gate_check(gate: GateMatrix, s: int, j: int, partial: MeasurementTuple) -> bool:
    """True iff detection ``j`` at sensor ``s`` passes against every other detection."""
    if j == 0:
        return True
    return all(
        gate.check(s, j, b, j_b) for b, j_b in enumerate(partial) if b != s and j_b > 0
    )


def _measurement_positions(ctx: PsiContext) -> list[np.ndarray]:
    return [
        measurement_positions(s, z) for s, z in zip(ctx.sensors, ctx.measurements, strict=True)
    ]


def _euclidean_pairs(ctx: PsiContext, threshold: float) -> Callable[[int, int], np.ndarray]:
    positions = _measurement_positions(ctx)

    def pair(a: int, b: int) -> np.ndarray:
        diff = positions[a][:, None, :] - positions[b][None, :, :]
        return np.linalg.norm(diff, axis=-1) < threshold

    return pair


def _mahalanobis_pairs(ctx: PsiContext, gate_prob: float) -> Callable[[int, int], np.ndarray]:
    threshold = float(chi2.ppf(gate_prob, df=MEASUREMENT_DIM))
    positions = _measurement_positions(ctx)

    def d2(target: int, source: int) -> np.ndarray:
        # Mahalanobis distance of sensor `target` measurements to the predicted
        # observation of each `source` position inverse; shape (m_target, m_source)
        sensor = ctx.sensors[target]
        pos = positions[source]
        states = np.column_stack([pos[:, 0], np.zeros(len(pos)), pos[:, 1], np.zeros(len(pos))])
        predicted = observe_states(sensor, states)
        z = ctx.measurements[target]
        d_bearing = wrap_angle(z[:, None, 0] - predicted[None, :, 0]) / sensor.bearing_std
        d_range = (z[:, None, 1] - predicted[None, :, 1]) / sensor.range_std
        return d_bearing**2 + d_range**2

    def pair(a: int, b: int) -> np.ndarray:
        return (d2(a, b) < threshold) | (d2(b, a).T < threshold)

    return pair


def build_gate_matrix(
    ctx: PsiContext, cfg: BirthConfig, stats: EvalStats | None = None
) -> GateMatrix:
    """Build the pairwise gate for the configured mode.

    Pseudo mode estimates the average pseudolikelihood of every detection
    pair using only the two sensors involved; those estimates are charged to
    ``stats.computed``.

    Raises:
        ValueError: If the gate mode is ``off``
    """
    mode = cfg.gate_mode
    if mode == "off":
        raise ValueError("Gate matrix requested with gating off")

    gate = GateMatrix(ctx.num_sensors)
    if mode == "euclidean":
        pair = _euclidean_pairs(ctx, cfg.gate_threshold)
    elif mode == "mahalanobis":
        pair = _mahalanobis_pairs(ctx, cfg.gate_threshold)
    else:
        pair = _pseudo_pairs(ctx, cfg.gate_threshold, stats)

    for a, b in combinations(range(ctx.num_sensors), 2):
        gate.passes[(a, b)] = pair(a, b).reshape(ctx.sizes[a], ctx.sizes[b])
    logger.debug(
        f"Gate ({mode}) built at step {ctx.timestep}: pass fraction {gate.pass_fraction:.3f}"
    )
    return gate


def _pseudo_pairs(
    ctx: PsiContext, threshold: float, stats: EvalStats | None
) -> Callable[[int, int], np.ndarray]:
    def pair(a: int, b: int) -> np.ndarray:
        sub = ctx.subcontext((a, b))
        m_a, m_b = ctx.sizes[a], ctx.sizes[b]
        out = np.ones((m_a, m_b), dtype=bool)
        for j_a in range(1, m_a + 1):
            for j_b in range(1, m_b + 1):
                out[j_a - 1, j_b - 1] = estimate_psi(sub, (j_a, j_b)).psi_bar >= threshold
        if stats is not None:
            stats.computed += m_a * m_b
            stats.gate_evaluations += m_a * m_b
        return out

    return pair
