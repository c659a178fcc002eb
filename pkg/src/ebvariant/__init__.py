"""Empirical Bayes variant detection for pooled sequencing count data.

Scores every site with the posterior probability of being a non-variant
(local fdr) under a binomial-binomial hierarchical model, estimates the
prior hyperparameters from the data by the method of moments, and calls
variants with a running-mean step-up rule that controls the Bayes FDR.
Frequentist baselines (per-pool exact binomial tests combined by Simes
or Fisher, then Benjamini-Hochberg) and a simulation benchmark harness
are included.
"""

from .accel import active_backend, set_backend, set_threads
from .baselines import (
    bh_procedure,
    fisher_meta,
    meta_call,
    meta_pvalues,
    pool_pvalue,
    simes_partial_conjunction,
    snver_call,
    snver_pvalues,
)
from .calling import call_pipeline, step_up_call, threshold_call
from .evaluation import (
    EvaluationReport,
    GoldStandardReport,
    ReplicationCounts,
    RocCurve,
    aggregate_replications,
    gold_standard_fdr,
    roc_from_scores,
    run_benchmark,
    run_roc,
    score_callset,
    sensitivity_at_fdr,
)
from .model import (
    alt_marginal_log_likelihood,
    batch_local_fdr,
    null_log_likelihood,
    site_local_fdr,
)
from .moments import compute_moments, estimate_from_data, estimate_hyperparameters
from .simulation import LatentTruth, SimulationSpec, simulate
from .types import (
    CallSet,
    EstimatedHyperparameters,
    EstimationError,
    Hyperparameters,
    MomentSummary,
    PoolDesign,
    SiteCountMatrix,
    SiteObservation,
)

__version__ = "0.1.0"

__all__ = [
    "CallSet",
    "EstimatedHyperparameters",
    "EstimationError",
    "EvaluationReport",
    "GoldStandardReport",
    "Hyperparameters",
    "LatentTruth",
    "MomentSummary",
    "PoolDesign",
    "ReplicationCounts",
    "RocCurve",
    "SimulationSpec",
    "SiteCountMatrix",
    "SiteObservation",
    "active_backend",
    "aggregate_replications",
    "alt_marginal_log_likelihood",
    "batch_local_fdr",
    "bh_procedure",
    "call_pipeline",
    "compute_moments",
    "estimate_from_data",
    "estimate_hyperparameters",
    "fisher_meta",
    "gold_standard_fdr",
    "meta_call",
    "meta_pvalues",
    "null_log_likelihood",
    "pool_pvalue",
    "roc_from_scores",
    "run_benchmark",
    "run_roc",
    "score_callset",
    "sensitivity_at_fdr",
    "set_backend",
    "set_threads",
    "simes_partial_conjunction",
    "simulate",
    "site_local_fdr",
    "snver_call",
    "snver_pvalues",
    "step_up_call",
    "threshold_call",
]
