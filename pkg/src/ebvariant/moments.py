"""Method-of-moments estimation of (pi1, a) from pooled count data.

All (site, pool) pairs are flattened into one sample. With
c = 1 - 4*eps/3, the two statistics

    m1 = mean(X/K - eps/3)
    m2 = mean( (X^2 - K^2 eps^2/9 - K (eps/3)(1 - eps/3)
                - K (1 - 2 eps/3) m1 - K^2 (2 eps/3) m1)
               / ((K^2 - K) c^2) )

have expectations c*pi1*a/2 and (N-1)/N * pi1*a^2/3 + pi1*a/(2N), which
invert to

    a_hat   = 3 (N c m2 - m1) / (2 m1 (N - 1))
    pi1_hat = 2 m1 / (c * a_hat)

Non-positive estimates are truncated to the floor values 0.01 (a) and
0.001 (pi1); small positive estimates pass through untouched (lifting
them to the floors measurably inflates the attained false discovery
rate in low-signal regimes). Finite-sample estimates above the valid
range are capped at 1.0 and 0.999. Pairs with K < 2 are excluded from
both statistics (the m2 denominator contains K^2 - K), with the
excluded count reported.
"""

from __future__ import annotations

from .special import chunked_pairwise_sum
from .types import (
    EstimatedHyperparameters,
    EstimationError,
    Hyperparameters,
    MomentSummary,
    PoolDesign,
    SiteCountMatrix,
)

A_FLOOR = 0.01
PI1_FLOOR = 0.001
PI1_CEIL = 0.999
A_CEIL = 1.0


def compute_moments(data: SiteCountMatrix, design: PoolDesign) -> MomentSummary:
    """Pooled first/second moment statistics over all pairs with K >= 2."""
    eps = design.error_rate
    c = 1.0 - 4.0 * eps / 3.0
    depth = data.depths.ravel()
    alt = data.alt_counts.ravel()
    keep = depth >= 2
    n_terms = int(keep.sum())
    if n_terms == 0:
        raise EstimationError(
            "no (site, pool) pair has depth >= 2; hyperparameters cannot be "
            "estimated from these data"
        )
    k = depth[keep].astype(float)
    x = alt[keep].astype(float)
    m1 = chunked_pairwise_sum(x / k - eps / 3.0) / n_terms
    numer = (
        x * x
        - k * k * (eps * eps / 9.0)
        - k * (eps / 3.0) * (1.0 - eps / 3.0)
        - k * (1.0 - 2.0 * eps / 3.0) * m1
        - k * k * (2.0 * eps / 3.0) * m1
    )
    denom = (k * k - k) * c * c
    m2 = chunked_pairwise_sum(numer / denom) / n_terms
    return MomentSummary(
        m1=m1, m2=m2, n_terms=n_terms, excluded_pairs=int(depth.size - n_terms)
    )


def estimate_hyperparameters(
    moments: MomentSummary, design: PoolDesign
) -> EstimatedHyperparameters:
    """Invert the moment equations, then truncate/clamp into the valid domain."""
    if design.pool_size < 2:
        raise EstimationError(
            "pool_size=1 leaves the carrier-frequency bound unidentified; "
            "supply fixed hyperparameters instead of estimating them"
        )
    eps = design.error_rate
    c = 1.0 - 4.0 * eps / 3.0
    big_n = design.pool_size
    if moments.m1 == 0.0:
        return EstimatedHyperparameters(
            raw_a=0.0,
            raw_pi1=0.0,
            hyper=Hyperparameters.from_pi1(PI1_FLOOR, A_FLOOR),
            truncated_a=True,
            truncated_pi1=True,
        )
    raw_a = 3.0 * (big_n * c * moments.m2 - moments.m1) / (2.0 * moments.m1 * (big_n - 1))
    truncated_a = raw_a <= 0.0
    a_t = A_FLOOR if truncated_a else raw_a
    raw_pi1 = 2.0 * moments.m1 / (c * a_t)
    truncated_pi1 = raw_pi1 <= 0.0
    pi1_t = PI1_FLOOR if truncated_pi1 else raw_pi1
    a_final = min(a_t, A_CEIL)
    pi1_final = min(pi1_t, PI1_CEIL)
    return EstimatedHyperparameters(
        raw_a=raw_a,
        raw_pi1=raw_pi1,
        hyper=Hyperparameters.from_pi1(pi1_final, a_final),
        truncated_a=truncated_a,
        truncated_pi1=truncated_pi1,
    )


def estimate_from_data(
    data: SiteCountMatrix, design: PoolDesign
) -> EstimatedHyperparameters:
    """Convenience composition: compute_moments then estimate_hyperparameters."""
    return estimate_hyperparameters(compute_moments(data, design), design)
