"""Variant-calling decision rules on local fdr scores.

``step_up_call`` rejects the largest prefix of the ascending-sorted
scores whose running mean stays at or below the nominal level, which
controls the Bayes FDR while rejecting as much as possible.
``threshold_call`` is the underlying fixed-cutoff rule (reject iff
score < t); the step-up rule is equivalent to it at a data-driven t.
"""

from __future__ import annotations

import numpy as np

from . import model, moments
from .types import (
    CallSet,
    EstimatedHyperparameters,
    Hyperparameters,
    PoolDesign,
    SiteCountMatrix,
)

MODES = ("empirical", "oracle", "fixed")


def _ranks(scores: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Stable ascending order and the 1-based rank of each input position."""
    order = np.argsort(scores, kind="stable")
    rank = np.empty(scores.size, dtype=np.int64)
    rank[order] = np.arange(1, scores.size + 1)
    return order, rank


def step_up_call(scores: np.ndarray, alpha: float) -> CallSet:
    """Reject the maximal prefix of sorted scores with running mean <= alpha.

    Ties are broken by original index (stable sort), so tied scores at
    the boundary may be split deterministically.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    order, rank = _ranks(scores)
    sorted_scores = scores[order]
    running_mean = np.cumsum(sorted_scores) / np.arange(1, scores.size + 1)
    admissible = np.nonzero(running_mean <= alpha)[0]
    j = 0 if admissible.size == 0 else int(admissible[-1]) + 1
    decisions = np.zeros(scores.size, dtype=bool)
    decisions[order[:j]] = True
    attained = float(sorted_scores[:j].mean()) if j > 0 else 0.0
    return CallSet(
        decisions=decisions,
        rank=rank,
        attained_bfdr=attained,
        num_rejected=j,
        alpha=alpha,
        scores=scores,
    )


def threshold_call(scores: np.ndarray, t: float) -> CallSet:
    """Reject every site with score strictly below t."""
    scores = np.asarray(scores, dtype=np.float64)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {t}")
    _, rank = _ranks(scores)
    decisions = scores < t
    j = int(decisions.sum())
    attained = float(scores[decisions].mean()) if j > 0 else 0.0
    return CallSet(
        decisions=decisions,
        rank=rank,
        attained_bfdr=attained,
        num_rejected=j,
        alpha=None,
        scores=scores,
    )


def call_pipeline(
    data: SiteCountMatrix,
    design: PoolDesign,
    alpha: float = 0.05,
    mode: str = "empirical",
    hyper: Hyperparameters | None = None,
    backend: str | None = None,
) -> CallSet:
    """Score every site and apply the step-up rule.

    ``empirical`` estimates (pi1, a) from the data by the method of
    moments (with truncation); ``oracle`` and ``fixed`` use the supplied
    hyperparameters without estimation.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    hyper_used: EstimatedHyperparameters | Hyperparameters
    if mode == "empirical":
        est = moments.estimate_from_data(data, design)
        hyper_used = est
        hyper_eff = est.hyper
    else:
        if hyper is None:
            raise ValueError(f"mode {mode!r} requires explicit hyperparameters")
        hyper_used = hyper
        hyper_eff = hyper
    scores = model.batch_local_fdr(data, design, hyper_eff, backend=backend)
    calls = step_up_call(scores, alpha)
    calls.hyper_used = hyper_used
    calls.mode = mode
    return calls
