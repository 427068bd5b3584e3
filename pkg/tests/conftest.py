"""Shared test fixtures and utilities for all tests."""

import os
import sys
from pathlib import Path

import numpy as np
import pytest

# Add src and root directories to Python path for imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / "src"))
sys.path.insert(0, str(project_root))

from home_meg.params import HomeMegParams, preset_params


def random_params(rng: np.random.Generator, n: int = 2, coupled: bool = False) -> HomeMegParams:
    """Random valid parameters with p, q > 0; `coupled` also enforces p+q <= 1 and gamma <= alpha."""
    p, q, alpha, gamma = rng.uniform(1e-3, 1.0, size=4)
    if coupled:
        total = p + q
        if total > 1.0:
            p, q = p / total * rng.uniform(0.1, 1.0), q / total * rng.uniform(0.1, 1.0)
        if gamma > alpha:
            alpha, gamma = gamma, alpha
    return HomeMegParams(n=n, p=float(p), q=float(q), alpha=float(alpha), gamma=float(gamma))


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch, tmp_path):
    """Keep HOMEMEG_* variables from the developer shell out of the tests."""
    for key in list(os.environ):
        if key.startswith("HOMEMEG_"):
            monkeypatch.delenv(key, raising=False)
    monkeypatch.setenv("HOMEMEG_OUTPUT_DIR", str(tmp_path / "results"))


@pytest.fixture
def mit_cell():
    """MIT Cell best-fit parameters (Lambda = 1000)."""
    return preset_params("mit-cell", n=2)


@pytest.fixture
def infocom06():
    return preset_params("infocom06", n=2)


@pytest.fixture
def coupling_params():
    """Sandwich setting: p+q <= 1 and gamma <= alpha, n = 64."""
    return HomeMegParams(n=64, p=0.1, q=0.1, alpha=0.5, gamma=0.05)


@pytest.fixture
def lemma_params():
    """Setting for the disconnection and connection bound checks."""
    return HomeMegParams(n=2, p=0.05, q=0.1, alpha=0.3, gamma=0.01)


@pytest.fixture
def oracle_params():
    return HomeMegParams(n=3, p=0.5, q=0.5, alpha=0.9, gamma=0.1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
