"""Frequentist comparison procedures: per-pool exact binomial tests with
Simes or Fisher combination, followed by Benjamini-Hochberg.

The per-pool test is the exact upper-tail binomial test of the
error-only null, X ~ Binom(K, eps/3). This is a deliberate
simplification of the published pooled callers it stands in for: it
tests the same null the model-based score uses, which is what the
benchmark comparison requires.
"""

from __future__ import annotations

import numpy as np
from scipy import special, stats

from .calling import _ranks
from .types import CallSet, PoolDesign, SiteCountMatrix

FISHER_P_FLOOR = 1e-300


def pool_pvalue(depth: int, alt: int, design: PoolDesign) -> float:
    """Exact upper-tail p-value P(Binom(depth, eps/3) >= alt). 1.0 when alt == 0."""
    if depth < 0 or alt < 0 or alt > depth:
        raise ValueError(
            f"invalid counts: depth={depth}, alt_count={alt} (need 0 <= alt <= depth)"
        )
    return float(_pool_pvalues(np.array([[depth]]), np.array([[alt]]), design)[0, 0])


def _pool_pvalues(depths, alts, design) -> np.ndarray:
    eps3 = design.error_rate / 3.0
    return stats.binom.sf(alts - 1, depths, eps3)


def simes_partial_conjunction(pool_ps) -> float:
    """Simes combination min_j (M/j) p_(j), capped at 1.

    Small values are evidence that at least one pool departs from the null.
    """
    ps = np.asarray(pool_ps, dtype=np.float64)
    if ps.size == 0:
        raise ValueError("need at least one p-value")
    return float(_simes_rows(ps[None, :])[0])


def _simes_rows(ps: np.ndarray) -> np.ndarray:
    m = ps.shape[1]
    ranked = np.sort(ps, axis=1) * (m / np.arange(1, m + 1))
    return np.minimum(ranked.min(axis=1), 1.0)


def fisher_meta(pool_ps) -> float:
    """Fisher combination: chi-squared (2M dof) survival of -2 sum(log p)."""
    ps = np.asarray(pool_ps, dtype=np.float64)
    if ps.size == 0:
        raise ValueError("need at least one p-value")
    return float(_fisher_rows(ps[None, :])[0])


def _fisher_rows(ps: np.ndarray) -> np.ndarray:
    m = ps.shape[1]
    stat = -2.0 * np.log(np.maximum(ps, FISHER_P_FLOOR)).sum(axis=1)
    return special.chdtrc(2 * m, stat)


def bh_procedure(pvalues, alpha: float) -> CallSet:
    """Benjamini-Hochberg step-up on a vector of p-values."""
    ps = np.asarray(pvalues, dtype=np.float64)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if np.any((ps < 0.0) | (ps > 1.0)):
        raise ValueError("p-values must lie in [0, 1]")
    order, rank = _ranks(ps)
    thresholds = alpha * np.arange(1, ps.size + 1) / ps.size
    passing = np.nonzero(ps[order] <= thresholds)[0]
    k = 0 if passing.size == 0 else int(passing[-1]) + 1
    decisions = np.zeros(ps.size, dtype=bool)
    decisions[order[:k]] = True
    return CallSet(
        decisions=decisions,
        rank=rank,
        attained_bfdr=None,
        num_rejected=k,
        alpha=alpha,
        scores=ps,
    )


def snver_pvalues(data: SiteCountMatrix, design: PoolDesign) -> np.ndarray:
    """Per-site Simes-combined p-values over the per-pool binomial tests."""
    pool_ps = _pool_pvalues(data.depths, data.alt_counts, design)
    return _simes_rows(pool_ps)


def meta_pvalues(data: SiteCountMatrix, design: PoolDesign) -> np.ndarray:
    """Per-site Fisher-combined p-values over the per-pool binomial tests."""
    pool_ps = _pool_pvalues(data.depths, data.alt_counts, design)
    return _fisher_rows(pool_ps)


def snver_call(data: SiteCountMatrix, design: PoolDesign, alpha: float) -> CallSet:
    calls = bh_procedure(snver_pvalues(data, design), alpha)
    calls.mode = "snver"
    return calls


def meta_call(data: SiteCountMatrix, design: PoolDesign, alpha: float) -> CallSet:
    calls = bh_procedure(meta_pvalues(data, design), alpha)
    calls.mode = "meta"
    return calls
