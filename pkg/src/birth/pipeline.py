"""One adaptive birth step: pre-prune, gate, sample, skip, construct, prune-and-cap."""

import logging
from contextlib import nullcontext

import numpy as np

from src.birth.cache import EvalStats, PsiEvaluator
from src.birth.components import construct_birth_lmb, prune_cap
from src.birth.gating import AssociationInput, build_gate_matrix, preprune
from src.birth.likelihood import PsiContext
from src.birth.sampler import run_birth_gibbs
from src.config import BirthConfig
from src.core.types import LmbDensity
from src.models.motion import NcvModel
from src.utils.analytics import STAGE_BIRTH_CONSTRUCTION, STAGE_BIRTH_SAMPLING, StageTimer
from src.utils.rng import Stream, substream

logger = logging.getLogger(__name__)


def adaptive_birth_step(
    ctx: PsiContext,
    assoc: AssociationInput,
    cfg: BirthConfig,
    model: NcvModel,
    rng: np.random.Generator | None = None,
    timer: StageTimer | None = None,
) -> tuple[LmbDensity, EvalStats]:
    """Build the birth LMB for ``ctx.timestep + 1`` from the current measurements.

    Args:
        ctx: Measurements, sensors and prior at the current step
        assoc: Association probabilities from the filter update
        cfg: Effective birth configuration (disabled mechanisms at neutral settings)
        model: Motion model used to predict birth densities
        rng: Chain seed source; defaults to the birth-chain substream of the step
        timer: Optional stage timer

    Returns:
        Birth LMB and the step's evaluation counters
    """
    if assoc.sizes != ctx.sizes:
        raise ValueError(f"Association sizes {assoc.sizes} do not match measurements {ctx.sizes}")
    if rng is None:
        rng = substream(ctx.base_seed, Stream.BIRTH_CHAINS, ctx.timestep)
    stats = EvalStats()
    evaluator = PsiEvaluator(ctx, cfg.memoize, thread_safe=cfg.workers > 1)

    with timer.stage(STAGE_BIRTH_SAMPLING) if timer else nullcontext():
        candidates = preprune(assoc, cfg.tau_assoc, stats)
        gate = build_gate_matrix(ctx, cfg, stats) if cfg.gate_mode != "off" else None
        tuples = run_birth_gibbs(evaluator, assoc, cfg, rng, candidates, gate, stats)

    with timer.stage(STAGE_BIRTH_CONSTRUCTION) if timer else nullcontext():
        birth = construct_birth_lmb(evaluator, assoc, tuples, cfg, model, stats)
        birth = prune_cap(birth, cfg.prune_threshold, cfg.cap)

    evaluator.record(stats)
    logger.debug(
        f"Birth step {ctx.timestep}: {len(tuples)} tuples -> {len(birth)} components, "
        f"stats {stats.as_dict()}"
    )
    return birth, stats
