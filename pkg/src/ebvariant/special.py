"""Numerical primitives: log binomial mass, regularized incomplete beta,
deterministic summation.

The incomplete beta is evaluated by a modified-Lentz continued fraction
(at most 200 iterations, convergence tolerance 1e-14) with an adaptive
quadrature fallback if the fraction fails to converge. Binomial masses
go through log-gamma, never raw factorials, so depths up to ~1e6 are fine.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln

CF_MAX_ITER = 200
CF_TOL = 1e-14
_TINY = 1e-300


def log_binom_coeff(k, x):
    """log C(k, x) for integer arrays, via log-gamma."""
    k = np.asarray(k, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    return gammaln(k + 1.0) - gammaln(x + 1.0) - gammaln(k - x + 1.0)


def log_binom_pmf(x, k, prob):
    """log P(Binom(k, prob) = x), elementwise, safe at prob in {0, 1}.

    Zero-probability outcomes return -inf; the 0*log(0) corners (x == 0
    with prob == 0, or x == k with prob == 1) contribute 0 as they must.
    """
    x = np.asarray(x, dtype=np.float64)
    k = np.asarray(k, dtype=np.float64)
    prob = np.asarray(prob, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        lp = np.log(prob)
        l1mp = np.log1p(-prob)
        out = log_binom_coeff(k, x)
        out = out + np.where(x == 0, 0.0, x * lp)
        out = out + np.where(k - x == 0, 0.0, (k - x) * l1mp)
    return out


def _betacf(a: float, b: float, x: float) -> tuple[float, bool]:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, CF_MAX_ITER + 1):
        m2 = 2 * m
        # even step
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        # odd step
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < CF_TOL:
            return h, True
    return h, False


def _betainc_quad(a: float, b: float, x: float) -> float:
    """Adaptive-quadrature fallback for I_x(a, b)."""
    from scipy.integrate import quad

    lbeta = math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)

    def density(t: float) -> float:
        return math.exp((a - 1.0) * math.log(t) + (b - 1.0) * math.log1p(-t) - lbeta)

    val, _ = quad(density, 0.0, x, epsabs=1e-14, epsrel=1e-12, limit=200)
    return min(max(val, 0.0), 1.0)


def betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError(f"betainc_reg requires a, b > 0, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"betainc_reg requires x in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    # symmetry transform keeps the fraction in its fast-converging region
    if x < (a + 1.0) / (a + b + 2.0):
        h, ok = _betacf(a, b, x)
        if ok:
            return math.exp(ln_front) * h / a
    else:
        h, ok = _betacf(b, a, 1.0 - x)
        if ok:
            return 1.0 - math.exp(ln_front) * h / b
    return _betainc_quad(a, b, x)


def chunked_pairwise_sum(values: np.ndarray, block: int = 4096) -> float:
    """Sum with a fixed blocked binary-tree reduction order.

    The reduction order depends only on the input length and the block
    size, never on threading or backend, so accumulated statistics are
    reproducible bit for bit.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size == 0:
        return 0.0
    sums = np.add.reduceat(v, np.arange(0, v.size, block))
    while sums.size > 1:
        if sums.size % 2:
            sums = np.append(sums, 0.0)
        sums = sums[0::2] + sums[1::2]
    return float(sums[0])
