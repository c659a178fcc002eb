"""Core domain types shared across the package."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class EstimationError(RuntimeError):
    """Hyperparameter estimation is impossible for the given data/design."""


@dataclass(frozen=True)
class PoolDesign:
    """Sequencing design: M pools of N haploids each, global error rate.

    ``error_rate`` is the probability that a read's base is flipped; a
    flipped reference base shows one specific alternative with probability
    ``error_rate / 3``.
    """

    pools: int
    pool_size: int
    error_rate: float = 0.01

    def __post_init__(self):
        if self.pools < 1:
            raise ValueError(f"pools must be >= 1, got {self.pools}")
        if self.pool_size < 1:
            raise ValueError(f"pool_size must be >= 1, got {self.pool_size}")
        if not 0.0 <= self.error_rate < 0.5:
            raise ValueError(
                f"error_rate must be in [0, 0.5), got {self.error_rate}"
            )


@dataclass(frozen=True)
class Hyperparameters:
    """Prior mass on null/variant sites and the carrier-frequency upper bound.

    ``pi0`` is the prior probability that a site is a non-variant, ``pi1``
    its complement, and ``a`` the upper bound of the uniform prior on the
    per-pool minor allele frequency of a variant site.
    """

    pi0: float
    pi1: float
    a: float

    def __post_init__(self):
        if not 0.0 <= self.pi1 <= 1.0 or not 0.0 <= self.pi0 <= 1.0:
            raise ValueError(f"pi0/pi1 must be probabilities, got {self.pi0}, {self.pi1}")
        if abs(self.pi0 + self.pi1 - 1.0) > 1e-12:
            raise ValueError(f"pi0 + pi1 must equal 1, got {self.pi0 + self.pi1}")
        if not 0.0 < self.a <= 1.0:
            raise ValueError(f"a must be in (0, 1], got {self.a}")

    @classmethod
    def from_pi1(cls, pi1: float, a: float) -> "Hyperparameters":
        return cls(pi0=1.0 - pi1, pi1=pi1, a=a)


@dataclass(frozen=True)
class SiteObservation:
    """Read depths and alternative-allele counts at one site, one per pool."""

    depths: np.ndarray
    alt_counts: np.ndarray

    def __post_init__(self):
        depths = np.asarray(self.depths, dtype=np.int64)
        alt = np.asarray(self.alt_counts, dtype=np.int64)
        object.__setattr__(self, "depths", depths)
        object.__setattr__(self, "alt_counts", alt)
        if depths.ndim != 1 or alt.shape != depths.shape:
            raise ValueError("depths and alt_counts must be 1-D and aligned")
        _check_counts(depths[None, :], alt[None, :], site_ids=None)


@dataclass
class SiteCountMatrix:
    """p sites x M pools of (depth, alt count) pairs, in a stable site order.

    ``site_ids`` is optional; when absent, ids ``s1..sp`` are synthesized
    on demand (e.g. when writing files).
    """

    depths: np.ndarray
    alt_counts: np.ndarray
    site_ids: list[str] | None = None

    def __post_init__(self):
        self.depths = np.ascontiguousarray(self.depths, dtype=np.int64)
        self.alt_counts = np.ascontiguousarray(self.alt_counts, dtype=np.int64)
        if self.depths.ndim != 2:
            raise ValueError("depths must be a (sites, pools) matrix")
        if self.alt_counts.shape != self.depths.shape:
            raise ValueError(
                f"alt_counts shape {self.alt_counts.shape} != depths shape {self.depths.shape}"
            )
        if self.depths.shape[0] < 1:
            raise ValueError("need at least one site")
        if self.site_ids is not None and len(self.site_ids) != self.depths.shape[0]:
            raise ValueError("site_ids length does not match the number of sites")
        _check_counts(self.depths, self.alt_counts, self.site_ids)

    @property
    def n_sites(self) -> int:
        return self.depths.shape[0]

    @property
    def n_pools(self) -> int:
        return self.depths.shape[1]

    def site(self, i: int) -> SiteObservation:
        return SiteObservation(self.depths[i], self.alt_counts[i])

    def site_id(self, i: int) -> str:
        if self.site_ids is not None:
            return self.site_ids[i]
        return f"s{i + 1}"

    def all_site_ids(self) -> list[str]:
        if self.site_ids is not None:
            return list(self.site_ids)
        return [f"s{i + 1}" for i in range(self.n_sites)]


def _check_counts(depths, alt_counts, site_ids):
    """Raise naming the first offending site if any count pair is invalid."""
    bad = (depths < 0) | (alt_counts < 0) | (alt_counts > depths)
    if not bad.any():
        return
    i, j = np.argwhere(bad)[0]
    sid = site_ids[i] if site_ids is not None else f"s{i + 1}"
    raise ValueError(
        f"invalid counts at site {sid!r}, pool {j + 1}: "
        f"depth={depths[i, j]}, alt_count={alt_counts[i, j]} "
        "(need 0 <= alt_count <= depth)"
    )


@dataclass(frozen=True)
class MomentSummary:
    """First/second moment statistics pooled over all usable (site, pool) pairs."""

    m1: float
    m2: float
    n_terms: int
    excluded_pairs: int = 0

    def __post_init__(self):
        if self.n_terms < 1:
            raise ValueError("n_terms must be >= 1")
        if not (np.isfinite(self.m1) and np.isfinite(self.m2)):
            raise ValueError("moments must be finite")


@dataclass(frozen=True)
class EstimatedHyperparameters:
    """Method-of-moments estimates plus the truncated/clamped values actually used."""

    raw_a: float
    raw_pi1: float
    hyper: Hyperparameters
    truncated_a: bool
    truncated_pi1: bool


@dataclass
class CallSet:
    """Per-site reject/accept decisions with the ranking that produced them.

    ``rank[i]`` is the 1-based position of site i in the ascending stable
    sort of the evidence scores. ``attained_bfdr`` is the mean fdr score
    over the rejected set (0.0 when nothing is rejected; None for call
    sets built from p-values, where no fdr scores exist). ``alpha`` is
    None for fixed-threshold calls.
    """

    decisions: np.ndarray
    rank: np.ndarray
    attained_bfdr: float | None
    num_rejected: int
    alpha: float | None = None
    hyper_used: EstimatedHyperparameters | Hyperparameters | None = None
    scores: np.ndarray | None = None
    mode: str | None = None

    def __post_init__(self):
        self.decisions = np.asarray(self.decisions, dtype=bool)
        self.rank = np.asarray(self.rank, dtype=np.int64)
        if self.decisions.shape != self.rank.shape:
            raise ValueError("decisions and rank must be aligned")
