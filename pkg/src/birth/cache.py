"""Psi-bar memoization and evaluation counters."""

import logging
import threading
from collections.abc import Callable
from concurrent.futures import Future
from contextlib import AbstractContextManager, nullcontext
from dataclasses import asdict, dataclass, fields

from src.birth.likelihood import PsiContext, PsiResult, estimate_psi
from src.core.types import MeasurementTuple

logger = logging.getLogger(__name__)


@dataclass(slots=True)
class EvalStats:
    """Per-timestep psi-bar evaluation counters.

    ``computed`` counts estimates actually performed (gate construction
    included); ``memo_hits`` counts lookups served from the cache. The
    remaining counters record work avoided by each mechanism.
    """

    computed: int = 0
    memo_hits: int = 0
    gated_skips: int = 0
    preprune_removed: int = 0
    component_skips: int = 0
    gate_evaluations: int = 0

    @property
    def needed(self) -> int:
        """Psi-bar values requested, however they were served."""
        return self.computed + self.memo_hits

    def __add__(self, other: "EvalStats") -> "EvalStats":
        return EvalStats(
            **{f.name: getattr(self, f.name) + getattr(other, f.name) for f in fields(self)}
        )

    def as_dict(self) -> dict[str, int]:
        return asdict(self)


class PsiCache:
    """Psi-bar values keyed on the measurement tuple, for one timestep.

    With ``thread_safe`` set, concurrent requesters of a key being computed
    wait for the first computation instead of repeating it; the waiters count
    as hits.
    """

    def __init__(self, timestep: int, thread_safe: bool = False):
        self.timestep = timestep
        self.entries: dict[MeasurementTuple, PsiResult] = {}
        self.hits = 0
        self.misses = 0
        self._thread_safe = thread_safe
        self._lock: AbstractContextManager = threading.Lock() if thread_safe else nullcontext()
        self._pending: dict[MeasurementTuple, Future[PsiResult]] = {}

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, key: MeasurementTuple) -> bool:
        return key in self.entries

    @property
    def lookups(self) -> int:
        return self.hits + self.misses

    def get_or_compute(
        self, key: MeasurementTuple, compute: Callable[[], PsiResult]
    ) -> PsiResult:
        """Return the cached value for ``key``, computing it at most once."""
        if not self._thread_safe:
            cached = self.entries.get(key)
            if cached is not None:
                self.hits += 1
                return cached
            self.misses += 1
            result = compute()
            self.entries[key] = result
            return result

        owned: Future[PsiResult] = Future()
        with self._lock:
            cached = self.entries.get(key)
            if cached is not None:
                self.hits += 1
                return cached
            waiting = self._pending.get(key)
            if waiting is None:
                self.misses += 1
                self._pending[key] = owned
            else:
                self.hits += 1
        if waiting is not None:
            return waiting.result()

        try:
            result = compute()
        except BaseException as e:
            with self._lock:
                self._pending.pop(key, None)
            owned.set_exception(e)
            raise
        with self._lock:
            self.entries[key] = result
            self._pending.pop(key, None)
        owned.set_result(result)
        return result

    def clear(self, timestep: int | None = None) -> None:
        """Drop all entries; optionally move the cache to a new timestep."""
        with self._lock:
            self.entries.clear()
            self._pending.clear()
            self.hits = 0
            self.misses = 0
            if timestep is not None:
                self.timestep = timestep


def psi_bar_cached(cache: PsiCache, ctx: PsiContext, meas_tuple: MeasurementTuple) -> PsiResult:
    """Memoized ``estimate_psi``.

    Raises:
        ValueError: If the cache belongs to another timestep
    """
    if cache.timestep != ctx.timestep:
        raise ValueError(
            f"Cache for step {cache.timestep} used at step {ctx.timestep}; clear it between steps"
        )
    return cache.get_or_compute(meas_tuple, lambda: estimate_psi(ctx, meas_tuple))


class PsiEvaluator:
    """Serves psi-bar requests with or without memoization and counts them."""

    def __init__(self, ctx: PsiContext, memoize: bool, thread_safe: bool = False):
        self.ctx = ctx
        self.memoize = memoize
        self.cache = PsiCache(ctx.timestep, thread_safe=thread_safe) if memoize else None
        self._uncached = 0
        self._lock: AbstractContextManager = threading.Lock() if thread_safe else nullcontext()

    def __call__(self, meas_tuple: MeasurementTuple) -> PsiResult:
        if self.cache is not None:
            return psi_bar_cached(self.cache, self.ctx, meas_tuple)
        with self._lock:
            self._uncached += 1
        return estimate_psi(self.ctx, meas_tuple)

    def psi_bar(self, meas_tuple: MeasurementTuple) -> float:
        return self(meas_tuple).psi_bar

    @property
    def computed(self) -> int:
        return self.cache.misses if self.cache is not None else self._uncached

    @property
    def hits(self) -> int:
        return self.cache.hits if self.cache is not None else 0

    def record(self, stats: EvalStats) -> None:
        """Add this evaluator's counts to ``stats``."""
        stats.computed += self.computed
        stats.memo_hits += self.hits
