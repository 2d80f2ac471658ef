# Copyright (c) 2025 takotime808

import sys
from pathlib import Path

import numpy as np
import pytest

# Ensure local src on sys.path if running from a source checkout
def _maybe_add_src_to_path():
    here = Path(__file__).resolve()
    # Try common layouts
    candidates = [
        here.parents[1] / "src",              # repo_root/src
        here.parents[2] / "src",              # when tests/ is nested one level deeper
    ]
    for c in candidates:
        if c.exists() and str(c) not in sys.path:
            sys.path.insert(0, str(c))

_maybe_add_src_to_path()

from isingbench.problems.instance import IsingInstance, gen_complete_pm1  # noqa: E402


@pytest.fixture(autouse=True)
def _clean_runtime_env(monkeypatch):
    # runtime options export env vars; keep tests isolated
    for var in ("ISINGBENCH_WORKERS", "ISINGBENCH_CLOCK", "ISINGBENCH_LOG_LEVEL"):
        # set first so teardown restores the original (possibly absent) value
        monkeypatch.setenv(var, "")
        monkeypatch.delenv(var)
    import isingbench.pipeline as pipeline
    monkeypatch.setattr(pipeline, "_RUNTIME", {"workers": 1, "clock": "wall"})


@pytest.fixture
def triangle():
    """Unit-weight triangle: max cut 2, ground energy -1."""
    return IsingInstance.from_edges(3, [(0, 1, 1), (0, 2, 1), (1, 2, 1)])


@pytest.fixture
def square():
    """Unit-weight 4-cycle: bipartite, max cut 4."""
    return IsingInstance.from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)])


@pytest.fixture
def k12():
    return gen_complete_pm1(12, seed=7)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


