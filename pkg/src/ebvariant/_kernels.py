"""numba kernels for the hot per-site scoring loop.

Import this module only when the numba lane is active; importing it
triggers numba compilation machinery. The kernel mirrors the numpy lane
in ``model.py`` operation for operation (same guards, same two-pass
log-sum-exp), so the lanes agree to within float rounding.
"""

import math

import numpy as np
from numba import njit, prange


@njit(cache=True, inline="always")
def _site_log_masses(depths, alts, i, lpn, l1mpn, lw, l_e3, l_1me3):
    """(null, alternative) summed log-likelihood over pools for site i."""
    n_pools = depths.shape[1]
    n_comp = lpn.shape[0]
    lf0 = 0.0
    lf1 = 0.0
    terms = np.empty(n_comp, dtype=np.float64)
    for j in range(n_pools):
        k = float(depths[i, j])
        x = float(alts[i, j])
        logc = math.lgamma(k + 1.0) - math.lgamma(x + 1.0) - math.lgamma(k - x + 1.0)
        t0 = logc
        if x > 0.0:
            t0 += x * l_e3
        if k - x > 0.0:
            t0 += (k - x) * l_1me3
        lf0 += t0
        tmax = -np.inf
        for n in range(n_comp):
            t = logc + lw[n]
            if x > 0.0:
                t += x * lpn[n]
            if k - x > 0.0:
                t += (k - x) * l1mpn[n]
            terms[n] = t
            if t > tmax:
                tmax = t
        if tmax == -np.inf:
            lf1 += -np.inf
        else:
            acc = 0.0
            for n in range(n_comp):
                acc += math.exp(terms[n] - tmax)
            lf1 += tmax + math.log(acc)
    return lf0, lf1


@njit(cache=True, parallel=True)
def batch_fdr_kernel(depths, alts, lpn, l1mpn, lw, l_e3, l_1me3, l_pi0, l_pi1, pi0, out):
    n_sites = depths.shape[0]
    for i in prange(n_sites):
        lf0, lf1 = _site_log_masses(depths, alts, i, lpn, l1mpn, lw, l_e3, l_1me3)
        d = (l_pi0 + lf0) - (l_pi1 + lf1)
        if math.isnan(d):
            # data impossible under both branches: fall back to the prior
            out[i] = pi0
        elif d >= 0.0:
            out[i] = 1.0 / (1.0 + math.exp(-d))
        else:
            e = math.exp(d)
            out[i] = e / (1.0 + e)
