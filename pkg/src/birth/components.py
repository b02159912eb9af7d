"""Birth LMB construction from sampled tuples, and prune-and-cap."""

import logging
from collections.abc import Iterable

from src.birth.cache import EvalStats, PsiEvaluator
from src.birth.gating import AssociationInput
from src.birth.likelihood import predict_birth_spatial, spatial_posterior
from src.birth.sampler import should_skip
from src.config import BirthConfig
from src.core.types import BernoulliComponent, Label, LmbDensity, MeasurementTuple
from src.models.motion import NcvModel
from src.utils.rng import Stream, substream

logger = logging.getLogger(__name__)


def construct_birth_lmb(
    evaluator: PsiEvaluator,
    assoc: AssociationInput,
    tuples: Iterable[MeasurementTuple],
    cfg: BirthConfig,
    model: NcvModel,
    stats: EvalStats | None = None,
) -> LmbDensity:
    """Build the birth LMB for the next timestep.

    Effective birth probabilities are ``r_U(J) psi_bar(J)`` normalized over
    the tuples kept after sample skipping; existence is
    ``min(r_b_max, r_hat * lambda_b)``. Each spatial density is the
    resampled importance posterior pushed through one NCV step, drawn from
    a stream owned by the tuple.
    """
    ctx = evaluator.ctx
    kept = sorted(t for t in tuples if not should_skip(t, cfg.max_missed, stats))
    if not kept:
        return LmbDensity()

    results = [evaluator(t) for t in kept]
    scores = [assoc.r_unassoc(t) * r.psi_bar for t, r in zip(kept, results, strict=True)]
    total = sum(scores)
    if not total > 0:
        logger.warning(
            f"All {len(kept)} birth tuples at step {ctx.timestep} have zero weight; "
            "no birth components"
        )
        return LmbDensity()

    components: list[BernoulliComponent] = []
    for meas_tuple, result, score in zip(kept, results, scores, strict=True):
        if not result.psi_bar > 0:
            logger.debug(f"Dropping tuple {meas_tuple}: zero psi-bar")
            continue
        r_hat = score / total
        existence = min(cfg.r_b_max, r_hat * cfg.lambda_b)
        rng = substream(ctx.base_seed, Stream.SPATIAL, ctx.timestep, *meas_tuple)
        posterior = spatial_posterior(result, cfg.posterior_particles, rng)
        components.append(
            BernoulliComponent(
                label=Label(ctx.timestep + 1, meas_tuple),
                existence=existence,
                spatial=predict_birth_spatial(model, posterior, rng),
            )
        )
    return LmbDensity(tuple(components))


def prune_cap(lmb: LmbDensity, prune_threshold: float, cap: int | None) -> LmbDensity:
    """Drop components below the threshold, then keep at most ``cap``.

    The cap keeps the highest existences, breaking ties by label order;
    survivors keep their original order.
    """
    kept = [c for c in lmb if c.existence >= prune_threshold]
    if cap is not None and len(kept) > cap:
        ranked = sorted(range(len(kept)), key=lambda i: (-kept[i].existence, kept[i].label))
        chosen = set(ranked[:cap])
        kept = [c for i, c in enumerate(kept) if i in chosen]
    return LmbDensity(tuple(kept))
