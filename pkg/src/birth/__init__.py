"""Adaptive birth: pseudolikelihoods, memoization, gating and Gibbs tuple sampling."""

from src.birth.cache import EvalStats, PsiCache, PsiEvaluator, psi_bar_cached
from src.birth.components import construct_birth_lmb, prune_cap
from src.birth.gating import (
    AssociationInput,
    GateMatrix,
    build_gate_matrix,
    gate_check,
    preprune,
)
from src.birth.likelihood import (
    PsiContext,
    PsiResult,
    estimate_psi,
    joint_psi,
    per_sensor_psi,
    predict_birth_spatial,
    spatial_posterior,
)
from src.birth.pipeline import adaptive_birth_step
from src.birth.sampler import gibbs_chain, gibbs_conditional, run_birth_gibbs, should_skip

__all__ = [
    "AssociationInput",
    "EvalStats",
    "GateMatrix",
    "PsiCache",
    "PsiContext",
    "PsiEvaluator",
    "PsiResult",
    "adaptive_birth_step",
    "build_gate_matrix",
    "construct_birth_lmb",
    "estimate_psi",
    "gate_check",
    "gibbs_chain",
    "gibbs_conditional",
    "joint_psi",
    "per_sensor_psi",
    "predict_birth_spatial",
    "preprune",
    "prune_cap",
    "psi_bar_cached",
    "run_birth_gibbs",
    "should_skip",
    "spatial_posterior",
]
