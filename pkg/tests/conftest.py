import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from ebvariant import PoolDesign, SimulationSpec, simulate


@pytest.fixture
def design():
    return PoolDesign(pools=5, pool_size=20, error_rate=0.01)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture(scope="session")
def small_dataset():
    """One modest simulated dataset with signal, reused across tests."""
    design = PoolDesign(pools=5, pool_size=20, error_rate=0.01)
    spec = SimulationSpec(p=20_000, design=design, pi1=0.01, a=0.02, seed=1234)
    data, truth = simulate(spec)
    return design, data, truth
