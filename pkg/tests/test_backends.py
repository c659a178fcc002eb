"""numba/numpy lane equivalence and determinism contracts."""

import os
import subprocess
import sys

import numpy as np
import pytest

from ebvariant import (
    Hyperparameters,
    SiteCountMatrix,
    batch_local_fdr,
    set_threads,
)
from ebvariant.accel import HAVE_NUMBA

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba unavailable")


@pytest.fixture(scope="module")
def scored_inputs(small_dataset):
    design, data, _ = small_dataset
    hyper = Hyperparameters.from_pi1(0.01, 0.02)
    return design, data, hyper


class TestLaneAgreement:
    @needs_numba
    def test_lanes_agree_to_rounding(self, scored_inputs):
        design, data, hyper = scored_inputs
        s_np = batch_local_fdr(data, design, hyper, backend="numpy")
        s_nb = batch_local_fdr(data, design, hyper, backend="numba")
        np.testing.assert_allclose(s_nb, s_np, rtol=1e-10, atol=1e-13)

    @needs_numba
    def test_lanes_agree_on_edge_priors(self, scored_inputs):
        design, data, _ = scored_inputs
        sub = SiteCountMatrix(data.depths[:200], data.alt_counts[:200])
        for hyper in (
            Hyperparameters(1.0, 0.0, 0.02),
            Hyperparameters(0.0, 1.0, 0.02),
            Hyperparameters.from_pi1(0.001, 1.0),
        ):
            s_np = batch_local_fdr(sub, design, hyper, backend="numpy")
            s_nb = batch_local_fdr(sub, design, hyper, backend="numba")
            np.testing.assert_allclose(s_nb, s_np, rtol=1e-10, atol=1e-13)

    @needs_numba
    def test_lanes_agree_with_zero_error_rate(self, rng):
        from ebvariant import PoolDesign

        design = PoolDesign(pools=3, pool_size=10, error_rate=0.0)
        depths = rng.integers(1, 40, size=(300, 3))
        alts = rng.binomial(depths, 0.02)
        data = SiteCountMatrix(depths, alts)
        hyper = Hyperparameters.from_pi1(0.01, 0.05)
        s_np = batch_local_fdr(data, design, hyper, backend="numpy")
        s_nb = batch_local_fdr(data, design, hyper, backend="numba")
        np.testing.assert_allclose(s_nb, s_np, rtol=1e-10, atol=1e-13)


class TestDeterminism:
    @needs_numba
    def test_bitwise_identical_across_thread_counts(self, scored_inputs):
        design, data, hyper = scored_inputs
        set_threads(1)
        one = batch_local_fdr(data, design, hyper, backend="numba")
        set_threads(2)
        two = batch_local_fdr(data, design, hyper, backend="numba")
        assert np.array_equal(one, two)

    def test_numpy_lane_bitwise_reproducible(self, scored_inputs):
        design, data, hyper = scored_inputs
        a = batch_local_fdr(data, design, hyper, backend="numpy")
        b = batch_local_fdr(data, design, hyper, backend="numpy")
        assert np.array_equal(a, b)

    def test_numpy_chunking_invisible(self, scored_inputs, monkeypatch):
        """Chunk size must not change a single output bit."""
        import ebvariant.model as model

        design, data, hyper = scored_inputs
        sub = SiteCountMatrix(data.depths[:3000], data.alt_counts[:3000])
        full = batch_local_fdr(sub, design, hyper, backend="numpy")
        monkeypatch.setattr(model, "_CHUNK_SITES", 257)
        chunked = batch_local_fdr(sub, design, hyper, backend="numpy")
        assert np.array_equal(full, chunked)

    @needs_numba
    def test_numba_batch_matches_per_site_loop(self, scored_inputs):
        design, data, hyper = scored_inputs
        sub = SiteCountMatrix(data.depths[:300], data.alt_counts[:300])
        batch = batch_local_fdr(sub, design, hyper, backend="numba")
        loop = np.array(
            [
                batch_local_fdr(
                    SiteCountMatrix(sub.depths[i : i + 1], sub.alt_counts[i : i + 1]),
                    design,
                    hyper,
                    backend="numba",
                )[0]
                for i in range(300)
            ]
        )
        assert np.array_equal(batch, loop)


class TestBackendSelection:
    def test_env_flag_selects_numpy(self):
        code = (
            "import ebvariant; print(ebvariant.active_backend())"
        )
        env = dict(os.environ, EBVARIANT_BACKEND="numpy")
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        assert out.stdout.strip() == "numpy"

    @needs_numba
    def test_env_flag_selects_numba(self):
        code = "import ebvariant; print(ebvariant.active_backend())"
        env = dict(os.environ, EBVARIANT_BACKEND="numba")
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        assert out.stdout.strip() == "numba"

    def test_invalid_env_flag_rejected(self):
        code = "import ebvariant"
        env = dict(os.environ, EBVARIANT_BACKEND="cuda")
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        assert out.returncode != 0

    def test_set_backend_validation(self):
        from ebvariant import set_backend
        from ebvariant.accel import active_backend

        before = active_backend()
        with pytest.raises(ValueError):
            set_backend("gpu")
        assert active_backend() == before
