"""
conftest.py — shared pytest fixtures.
"""
import importlib

import pytest

from uniwkb.services.potentials.catalog import make_potential


@pytest.fixture(autouse=True)
def temp_artifacts_dir(tmp_path, monkeypatch):
    """Redirect ARTIFACTS_DIR to a throwaway temp directory for every test."""
    import uniwkb.core.config as cfg
    monkeypatch.setattr(cfg, "ARTIFACTS_DIR", tmp_path / "artifacts")

    # Re-import so artifact_store picks up the patched value
    import uniwkb.services.storage.artifact_store as store
    importlib.reload(store)
    import uniwkb.cli as cli
    importlib.reload(cli)
    return tmp_path / "artifacts"


# ── Natural-unit potentials (m = ħ = e = ω = α = 1) ───────────────────────────

@pytest.fixture
def hydrogen():
    return make_potential("hydrogen", {"l": 0})


@pytest.fixture
def morse():
    return make_potential("morse", {"v0": 1, "v1": -2})


@pytest.fixture
def pt_well():
    return make_potential("poschl-teller-well", {"v0": -10})


@pytest.fixture
def pt_barrier():
    """8mv0/(ħ²α²) = 20."""
    return make_potential("poschl-teller-barrier", {"v0": 2.5})


@pytest.fixture
def eckart():
    return make_potential("eckart", {"v0": 1, "v1": -20})


@pytest.fixture
def oscillator():
    return make_potential("pure-oscillator-1d")
