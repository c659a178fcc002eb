"""Generator determinism and distributional correctness."""

import numpy as np
import pytest
from scipy import stats

from ebvariant import PoolDesign, SimulationSpec, simulate
from ebvariant.simulation import CHUNK_SITES, _simulate_chunk


class TestDeterminism:
    def test_same_seed_bitwise_identical(self, design):
        spec = SimulationSpec(p=30_000, design=design, pi1=0.01, a=0.02, seed=5)
        d1, t1 = simulate(spec)
        d2, t2 = simulate(spec)
        assert np.array_equal(d1.depths, d2.depths)
        assert np.array_equal(d1.alt_counts, d2.alt_counts)
        assert np.array_equal(t1.mu, t2.mu)
        assert np.array_equal(t1.theta, t2.theta)
        assert np.array_equal(t1.n_alt, t2.n_alt)

    def test_seed_and_replication_change_output(self, design):
        base = SimulationSpec(p=5_000, design=design, pi1=0.01, a=0.02, seed=5)
        other_seed = SimulationSpec(p=5_000, design=design, pi1=0.01, a=0.02, seed=6)
        d0, _ = simulate(base)
        d1, _ = simulate(other_seed)
        d2, _ = simulate(base, replication=1)
        assert not np.array_equal(d0.alt_counts, d1.alt_counts)
        assert not np.array_equal(d0.alt_counts, d2.alt_counts)

    def test_chunks_are_schedule_independent(self, design):
        """Assembling per-chunk substreams in any order reproduces simulate()."""
        p = 2 * CHUNK_SITES + 1234
        spec = SimulationSpec(p=p, design=design, pi1=0.01, a=0.02, seed=17)
        data, truth = simulate(spec)
        for chunk in reversed(range(3)):
            lo = chunk * CHUNK_SITES
            hi = min(lo + CHUNK_SITES, p)
            d, x, m, t, n = _simulate_chunk(spec, 0, chunk, hi - lo)
            assert np.array_equal(data.depths[lo:hi], d)
            assert np.array_equal(data.alt_counts[lo:hi], x)
            assert np.array_equal(truth.mu[lo:hi], m)
            assert np.array_equal(truth.theta[lo:hi], t)
            assert np.array_equal(truth.n_alt[lo:hi], n)


class TestLatentStructure:
    def test_pure_null_has_no_variants(self, design):
        spec = SimulationSpec(p=10_000, design=design, pi1=0.0, a=0.02, seed=3)
        _, truth = simulate(spec)
        assert not truth.mu.any()
        assert np.all(truth.theta == 0.0)
        assert np.all(truth.n_alt == 0)

    def test_no_error_no_signal_means_all_zero(self):
        design = PoolDesign(pools=5, pool_size=20, error_rate=0.0)
        spec = SimulationSpec(p=10_000, design=design, pi1=0.0, a=0.02, seed=3)
        data, _ = simulate(spec)
        assert np.all(data.alt_counts == 0)

    def test_variant_sites_have_positive_theta(self, design):
        spec = SimulationSpec(p=50_000, design=design, pi1=0.02, a=0.02, seed=11)
        _, truth = simulate(spec)
        on = truth.mu
        assert np.all(truth.theta[on] > 0.0)
        assert np.all(truth.theta[on] <= 0.02)
        assert np.all(truth.theta[~on] == 0.0)

    def test_variant_fraction_concentrates(self, design):
        spec = SimulationSpec(p=100_000, design=design, pi1=0.01, a=0.02, seed=29)
        _, truth = simulate(spec)
        frac = truth.mu.mean()
        assert abs(frac - 0.01) <= 3 * np.sqrt(0.01 * 0.99 / 100_000)


class TestDistributions:
    def test_null_counts_chi_squared_gof(self, design):
        """With pi1=0, alt counts follow Binom(K, eps/3): chi-squared GOF
        over 1e5 (site, pool) draws, expected bins from the observed depths."""
        spec = SimulationSpec(p=20_000, design=design, pi1=0.0, a=0.02, seed=41)
        data, _ = simulate(spec)
        k = data.depths.ravel()
        x = data.alt_counts.ravel()
        assert k.size == 100_000
        eps3 = design.error_rate / 3.0
        # bins 0, 1, 2, >=3; expected counts sum scipy pmf over observed depths
        observed = np.array([(x == 0).sum(), (x == 1).sum(), (x == 2).sum(), (x >= 3).sum()])
        pmf0 = stats.binom.pmf(0, k, eps3).sum()
        pmf1 = stats.binom.pmf(1, k, eps3).sum()
        pmf2 = stats.binom.pmf(2, k, eps3).sum()
        expected = np.array([pmf0, pmf1, pmf2, k.size - pmf0 - pmf1 - pmf2])
        chi2, pval = stats.chisquare(observed, expected)
        assert pval >= 0.001

    def test_coverage_mean_within_half_percent(self, design):
        spec = SimulationSpec(p=200_000, design=design, pi1=0.0, a=0.02, seed=53)
        data, _ = simulate(spec)
        assert data.depths.size == 1_000_000
        assert abs(data.depths.mean() - 30.0) / 30.0 <= 0.005

    def test_coverage_floor(self, design):
        spec = SimulationSpec(
            p=20_000, design=design, pi1=0.0, a=0.02, seed=59, coverage_mean=2.0
        )
        data, _ = simulate(spec)
        assert data.depths.min() >= 1

    def test_conditional_law_given_carriers(self, design):
        """Among pools of variant sites with n carriers, X/K concentrates at p_n."""
        spec = SimulationSpec(p=400_000, design=design, pi1=0.05, a=0.05, seed=67)
        data, truth = simulate(spec)
        eps = design.error_rate
        big_n = design.pool_size
        for n0 in (1, 2):
            mask = truth.mu[:, None] & (truth.n_alt == n0)
            assert mask.sum() > 500
            ratios = data.alt_counts[mask] / data.depths[mask]
            p_n = (n0 / big_n) * (1 - eps) + ((big_n - n0) / big_n) * (eps / 3)
            se = ratios.std() / np.sqrt(ratios.size)
            assert abs(ratios.mean() - p_n) <= 4 * se

    def test_spec_validation(self, design):
        with pytest.raises(ValueError):
            SimulationSpec(p=0, design=design, pi1=0.01, a=0.02)
        with pytest.raises(ValueError):
            SimulationSpec(p=10, design=design, pi1=1.0, a=0.02)
        with pytest.raises(ValueError):
            SimulationSpec(p=10, design=design, pi1=0.5, a=0.0)
        with pytest.raises(ValueError):
            SimulationSpec(p=10, design=design, pi1=0.5, a=0.02, coverage_mean=-1)
