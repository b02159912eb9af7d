"""Analytics and wall-time tracking utilities."""

import logging
import time
from collections.abc import Iterator
from contextlib import contextmanager

logger = logging.getLogger(__name__)

# Stage names reported per step
STAGE_BIRTH_SAMPLING = "birth_sampling"
STAGE_BIRTH_CONSTRUCTION = "birth_construction"
STAGE_FILTER_UPDATE = "filter_update"
STAGE_METRICS = "metrics"

STAGES = (
    STAGE_BIRTH_SAMPLING,
    STAGE_BIRTH_CONSTRUCTION,
    STAGE_FILTER_UPDATE,
    STAGE_METRICS,
)


class StageTimer:
    """Accumulates wall-clock seconds per named stage."""

    def __init__(self) -> None:
        self.elapsed: dict[str, float] = {name: 0.0 for name in STAGES}

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        """Time the enclosed block and add it to ``name``."""
        start = time.perf_counter()
        try:
            yield
        finally:
            self.elapsed[name] = self.elapsed.get(name, 0.0) + time.perf_counter() - start

    def snapshot(self) -> dict[str, float]:
        return dict(self.elapsed)

    def reset(self) -> None:
        for name in self.elapsed:
            self.elapsed[name] = 0.0

    @property
    def total(self) -> float:
        return sum(self.elapsed.values())


def birth_fraction(elapsed: dict[str, float]) -> float:
    """Share of wall time spent in the birth stages.

    Args:
        elapsed: Stage name to seconds

    Returns:
        Fraction in [0, 1]; 0 when nothing was timed
    """
    total = sum(elapsed.values())
    if total <= 0:
        return 0.0
    birth = elapsed.get(STAGE_BIRTH_SAMPLING, 0.0) + elapsed.get(STAGE_BIRTH_CONSTRUCTION, 0.0)
    return birth / total
