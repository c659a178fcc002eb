"""Null and alternative marginal likelihoods, and the per-site local fdr.

The generative model for the alt-allele count X at one site in one pool
of N haploids with depth K and error rate eps:

* non-variant site: X ~ Binom(K, eps/3);
* variant site: the per-pool minor allele frequency theta is uniform on
  (0, a), the carrier count n ~ Binom(N, theta), and
  X ~ Binom(K, p_n) with p_n = (n/N)(1 - eps) + ((N - n)/N)(eps/3).

Marginalizing theta out of each carrier-count component has a closed
form: (1/a) C(N,n) int_0^a theta^n (1-theta)^(N-n) dtheta equals
I_a(n+1, N-n+1) / (a (N+1)) with I the regularized incomplete beta, so
the alternative marginal is a fixed (N+1)-component binomial mixture.
The local fdr of a site is the posterior null probability combining all
pools, computed entirely in log space.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit

from . import accel
from .special import betainc_reg, log_binom_coeff, log_binom_pmf
from .types import Hyperparameters, PoolDesign, SiteCountMatrix, SiteObservation

_CHUNK_SITES = 65536


def _validate_pair(depth: int, alt: int) -> None:
    if depth < 0 or alt < 0 or alt > depth:
        raise ValueError(
            f"invalid counts: depth={depth}, alt_count={alt} (need 0 <= alt <= depth)"
        )


def mixture_probs(design: PoolDesign) -> np.ndarray:
    """Success probabilities p_n for carrier counts n = 0..N."""
    n = np.arange(design.pool_size + 1, dtype=np.float64)
    big_n = float(design.pool_size)
    eps = design.error_rate
    return (n / big_n) * (1.0 - eps) + ((big_n - n) / big_n) * (eps / 3.0)


def prior_mixture_log_weights(design: PoolDesign, a: float) -> np.ndarray:
    """Log prior mass of each carrier count under theta ~ U(0, a).

    Weight n is I_a(n+1, N-n+1) / (a (N+1)); the N+1 weights sum to 1.
    """
    if not 0.0 < a <= 1.0:
        raise ValueError(f"a must be in (0, 1], got {a}")
    big_n = design.pool_size
    w = np.array(
        [betainc_reg(n + 1.0, big_n - n + 1.0, a) for n in range(big_n + 1)]
    )
    with np.errstate(divide="ignore"):
        return np.log(w) - np.log(a * (big_n + 1.0))


def null_log_likelihood(depth: int, alt: int, design: PoolDesign) -> float:
    """log P(X = alt | depth, non-variant site) = log Binom(alt; depth, eps/3)."""
    _validate_pair(depth, alt)
    return float(log_binom_pmf(alt, depth, design.error_rate / 3.0))


def alt_marginal_log_likelihood(
    depth: int, alt: int, design: PoolDesign, a: float
) -> float:
    """log P(X = alt | depth, variant site) with theta marginalized over U(0, a)."""
    _validate_pair(depth, alt)
    lw = prior_mixture_log_weights(design, a)
    pn = mixture_probs(design)
    return float(_alt_log_marginal(np.array([depth]), np.array([alt]), pn, lw)[0])


def _alt_log_marginal(depths, alts, pn, lw):
    """Vectorized mixture log-marginal; depths/alts broadcast against (N+1,) components."""
    k = np.asarray(depths, dtype=np.float64)[..., None]
    x = np.asarray(alts, dtype=np.float64)[..., None]
    with np.errstate(divide="ignore", invalid="ignore"):
        lpn = np.log(pn)
        l1mpn = np.log1p(-pn)
        terms = log_binom_coeff(k, x) + lw
        terms = terms + np.where(x == 0, 0.0, x * lpn)
        terms = terms + np.where(k - x == 0, 0.0, (k - x) * l1mpn)
        tmax = terms.max(axis=-1)
        lse = tmax + np.log(np.exp(terms - tmax[..., None]).sum(axis=-1))
    return np.where(np.isneginf(tmax), -np.inf, lse)


def site_local_fdr(
    obs: SiteObservation, design: PoolDesign, hyper: Hyperparameters
) -> float:
    """Posterior probability that the site is a non-variant, given all pools."""
    if obs.depths.shape[0] != design.pools:
        raise ValueError(
            f"observation has {obs.depths.shape[0]} pools, design has {design.pools}"
        )
    data = SiteCountMatrix(obs.depths[None, :], obs.alt_counts[None, :])
    return float(_batch_fdr_numpy(data.depths, data.alt_counts, design, hyper)[0])


def batch_local_fdr(
    data: SiteCountMatrix,
    design: PoolDesign,
    hyper: Hyperparameters,
    backend: str | None = None,
) -> np.ndarray:
    """Local fdr score for every site, in input order.

    Output is identical for any thread count; the numba and numpy lanes
    agree to float rounding. ``backend`` overrides the default lane.
    """
    if data.n_pools != design.pools:
        raise ValueError(
            f"data has {data.n_pools} pools, design has {design.pools}"
        )
    lane = accel.resolve_backend(backend)
    if lane == "numba":
        return _batch_fdr_numba(data.depths, data.alt_counts, design, hyper)
    return _batch_fdr_numpy(data.depths, data.alt_counts, design, hyper)


def _log_prior_and_error_terms(design: PoolDesign, hyper: Hyperparameters):
    eps3 = design.error_rate / 3.0
    with np.errstate(divide="ignore"):
        l_e3 = float(np.log(eps3)) if eps3 > 0.0 else -np.inf
        l_pi0 = float(np.log(hyper.pi0)) if hyper.pi0 > 0.0 else -np.inf
        l_pi1 = float(np.log(hyper.pi1)) if hyper.pi1 > 0.0 else -np.inf
    l_1me3 = float(np.log1p(-eps3))
    return l_e3, l_1me3, l_pi0, l_pi1


def _batch_fdr_numpy(depths, alts, design, hyper):
    pn = mixture_probs(design)
    lw = prior_mixture_log_weights(design, hyper.a)
    with np.errstate(divide="ignore"):
        lpn = np.log(pn)
        l1mpn = np.log1p(-pn)
    l_e3, l_1me3, l_pi0, l_pi1 = _log_prior_and_error_terms(design, hyper)
    n_sites = depths.shape[0]
    out = np.empty(n_sites, dtype=np.float64)
    for lo in range(0, n_sites, _CHUNK_SITES):
        hi = min(lo + _CHUNK_SITES, n_sites)
        k = depths[lo:hi].astype(np.float64)
        x = alts[lo:hi].astype(np.float64)
        with np.errstate(invalid="ignore"):
            logc = log_binom_coeff(k, x)
            lf0 = logc.copy()
            lf0 += np.where(x == 0, 0.0, x * l_e3)
            lf0 += np.where(k - x == 0, 0.0, (k - x) * l_1me3)
            terms = logc[:, :, None] + lw[None, None, :]
            terms = terms + np.where(x[:, :, None] == 0, 0.0, x[:, :, None] * lpn)
            terms = terms + np.where(
                (k - x)[:, :, None] == 0, 0.0, (k - x)[:, :, None] * l1mpn
            )
            tmax = terms.max(axis=2)
            lf1 = tmax + np.log(np.exp(terms - tmax[:, :, None]).sum(axis=2))
            lf1 = np.where(np.isneginf(tmax), -np.inf, lf1)
            # accumulate pools left to right, matching the kernel's loop order
            a_log = np.full(hi - lo, l_pi0)
            b_log = np.full(hi - lo, l_pi1)
            for j in range(depths.shape[1]):
                a_log += lf0[:, j]
                b_log += lf1[:, j]
            d = a_log - b_log
        scores = expit(d)
        out[lo:hi] = np.where(np.isnan(d), hyper.pi0, scores)
    return out


def _batch_fdr_numba(depths, alts, design, hyper):
    from . import _kernels

    pn = mixture_probs(design)
    lw = prior_mixture_log_weights(design, hyper.a)
    with np.errstate(divide="ignore"):
        lpn = np.log(pn)
        l1mpn = np.log1p(-pn)
    l_e3, l_1me3, l_pi0, l_pi1 = _log_prior_and_error_terms(design, hyper)
    out = np.empty(depths.shape[0], dtype=np.float64)
    _kernels.batch_fdr_kernel(
        depths, alts, lpn, l1mpn, lw, l_e3, l_1me3, l_pi0, l_pi1, hyper.pi0, out
    )
    return out
