"""Synthetic pooled-sequencing data with retained latent truth.

Generation is chunked over sites, one counter-based Philox stream per
(seed, replication, chunk), so output is bitwise reproducible and does
not depend on how chunks are scheduled. Coverage is gamma distributed
(rounded, floored at 1); the gamma shape is a knob, defaulting to 3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .types import PoolDesign, SiteCountMatrix

CHUNK_SITES = 16384
DEFAULT_COVERAGE_MEAN = 30.0
DEFAULT_COVERAGE_SHAPE = 3.0


@dataclass(frozen=True)
class SimulationSpec:
    """Parameters of one simulation scenario."""

    p: int
    design: PoolDesign
    pi1: float
    a: float
    coverage_mean: float = DEFAULT_COVERAGE_MEAN
    coverage_shape: float = DEFAULT_COVERAGE_SHAPE
    seed: int = 0
    replications: int = 1

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"p must be >= 1, got {self.p}")
        if not 0.0 <= self.pi1 < 1.0:
            raise ValueError(f"pi1 must be in [0, 1), got {self.pi1}")
        if not 0.0 < self.a <= 1.0:
            raise ValueError(f"a must be in (0, 1], got {self.a}")
        if self.coverage_mean <= 0.0 or self.coverage_shape <= 0.0:
            raise ValueError("coverage mean and shape must be positive")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")


@dataclass
class LatentTruth:
    """Hidden state behind a simulated dataset: variant indicators, per-pool
    minor allele frequencies, and carrier counts."""

    mu: np.ndarray
    theta: np.ndarray
    n_alt: np.ndarray


def _chunk_rng(spec: SimulationSpec, replication: int, chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=spec.seed, spawn_key=(replication, chunk))
    return np.random.Generator(np.random.Philox(ss))


def _simulate_chunk(spec: SimulationSpec, replication: int, chunk: int, size: int):
    rng = _chunk_rng(spec, replication, chunk)
    m_pools = spec.design.pools
    big_n = spec.design.pool_size
    eps = spec.design.error_rate
    mu = rng.random(size) < spec.pi1
    # 1 - U(0,1) keeps theta strictly positive for variant sites
    theta = np.where(mu[:, None], spec.a * (1.0 - rng.random((size, m_pools))), 0.0)
    n_alt = rng.binomial(big_n, theta)
    scale = spec.coverage_mean / spec.coverage_shape
    depths = np.maximum(
        1, np.rint(rng.gamma(spec.coverage_shape, scale, (size, m_pools)))
    ).astype(np.int64)
    succ = (n_alt / big_n) * (1.0 - eps) + ((big_n - n_alt) / big_n) * (eps / 3.0)
    alts = rng.binomial(depths, succ)
    return depths, alts, mu, theta, n_alt


def simulate(spec: SimulationSpec, replication: int = 0) -> tuple[SiteCountMatrix, LatentTruth]:
    """Generate one dataset; ``replication`` indexes independent repeats."""
    n_chunks = (spec.p + CHUNK_SITES - 1) // CHUNK_SITES
    depths = np.empty((spec.p, spec.design.pools), dtype=np.int64)
    alts = np.empty_like(depths)
    mu = np.empty(spec.p, dtype=bool)
    theta = np.empty((spec.p, spec.design.pools), dtype=np.float64)
    n_alt = np.empty((spec.p, spec.design.pools), dtype=np.int64)
    for chunk in range(n_chunks):
        lo = chunk * CHUNK_SITES
        hi = min(lo + CHUNK_SITES, spec.p)
        d, x, m, t, n = _simulate_chunk(spec, replication, chunk, hi - lo)
        depths[lo:hi] = d
        alts[lo:hi] = x
        mu[lo:hi] = m
        theta[lo:hi] = t
        n_alt[lo:hi] = n
    data = SiteCountMatrix(depths, alts)
    return data, LatentTruth(mu=mu, theta=theta, n_alt=n_alt)
