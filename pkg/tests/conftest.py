import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from slrc.core.config import CertificateConfig, SolverConfig, reset_config  # noqa: E402

slow = pytest.mark.skipif(not os.getenv("SLRC_SLOW_TESTS"), reason="set SLRC_SLOW_TESTS=1 to run the long studies")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def solver_config():
    return SolverConfig(max_iters=20000)


@pytest.fixture
def cert_config():
    return CertificateConfig()


@pytest.fixture(autouse=True)
def clean_config(monkeypatch):
    """Tests never see SLRC_* variables from the caller's shell."""
    for name in list(os.environ):
        if name.startswith("SLRC_") and name != "SLRC_SLOW_TESTS":
            monkeypatch.delenv(name, raising=False)
    reset_config()
    yield
    reset_config()
