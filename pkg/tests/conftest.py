import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from core.params import ModelParams, homogeneous_params  # noqa: E402


@pytest.fixture
def params_n1():
    """N=1, theta=0.2, p=2: a(0.5)=5.525, d(0.5)=0.105."""
    return ModelParams(N=1, p=2.0, q=3.0, xi=0.5, theta=(0.2,))


@pytest.fixture
def params_n2():
    """N=2 reference sample; tau(0) = 9.6768 id."""
    return ModelParams(N=2, p=2.0, q=3.0, xi=0.5, theta=(0.2, -0.4))


@pytest.fixture
def homogeneous_n1():
    return homogeneous_params(1, 1.3, 2.1, 0.5)


@pytest.fixture
def homogeneous_n2():
    return homogeneous_params(2, 1.3, 2.1, 0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(20261017)


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv("ODBA_CACHE_DIR", str(d))
    return d


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-spectrum sweeps and sampled catalog runs")
