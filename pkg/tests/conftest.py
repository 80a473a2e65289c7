"""
Shared fixtures for the acr-scan tests.

Puts the project root on sys.path so both the ``acr`` package and the
``acr_scan`` script import without installation.
"""

import sys
from pathlib import Path

import pytest

project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from acr import catalog, config_manager, load_file  # noqa: E402
from acr.catalog import NETWORKS_DIR  # noqa: E402


@pytest.fixture(autouse=True)
def clean_overrides():
    """CLI flags write process-wide overrides; reset them around every test."""
    config_manager.clear_overrides()
    yield
    config_manager.clear_overrides()


@pytest.fixture
def networks_dir() -> Path:
    return NETWORKS_DIR


@pytest.fixture
def load_example():
    """Load a bundled network by catalog name."""
    def _load(name: str):
        return catalog.get(name).load()
    return _load


@pytest.fixture
def shinar_feinberg(load_example):
    return load_example("shinar-feinberg").system


@pytest.fixture
def lacr_power_law(load_example):
    return load_example("lacr-power-law").system


@pytest.fixture
def convex_rays(load_example):
    return load_example("convex-rays").system


@pytest.fixture
def divisibility_control(load_example):
    return load_example("divisibility-control").system


@pytest.fixture
def idhkp_idh(load_example):
    return load_example("idhkp-idh").system


@pytest.fixture
def idhkp_idh_symbolic(load_example):
    return load_example("idhkp-idh-symbolic").system


@pytest.fixture
def dimerization(load_example):
    return load_example("dimerization").system


@pytest.fixture
def write_file(tmp_path):
    """Write text to a file under tmp_path and return its path."""
    def _write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        return path
    return _write
