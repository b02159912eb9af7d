"""Labeled random substreams derived from one root seed."""

from enum import IntEnum

import numpy as np


class Stream(IntEnum):
    """Substream labels; each concern draws from its own stream."""

    TRUTH = 1
    MEASUREMENTS = 2
    FILTER = 3
    BIRTH_CHAINS = 4
    PSI = 5
    SPATIAL = 6


def substream(seed: int, stream: Stream, *keys: int) -> np.random.Generator:
    """Generator that depends only on ``(seed, stream, keys)``.

    Keys must be nonnegative integers (timesteps, sensor ids, tuple entries).
    """
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(int(stream), *map(int, keys)))
    )
