"""Общие фикстуры тестов."""

import numpy as np
import pytest

from app.services.model import StatePair, SystemParams
from app.services.spectral import PeriodicGrid, SpectralField


@pytest.fixture
def grid() -> PeriodicGrid:
    return PeriodicGrid(64)


@pytest.fixture
def ccch() -> SystemParams:
    return SystemParams.preset("ccch")


@pytest.fixture
def mixed() -> SystemParams:
    return SystemParams.preset("mixed")


@pytest.fixture
def smooth_state() -> StatePair:
    """Умеренные гладкие данные для проверок сходимости интегратора."""
    grid = PeriodicGrid(32)
    u = SpectralField.from_function(grid, lambda x: 0.5 + 0.2 * np.cos(x))
    v = SpectralField.from_function(grid, lambda x: 0.3 + 0.2 * np.sin(x))
    return StatePair(u, v)


@pytest.fixture(autouse=True)
def isolated_artifacts(tmp_path, monkeypatch):
    """Артефакты CLI складываются во временную папку."""
    monkeypatch.setenv("GCH2_ARTIFACTS_DIR", str(tmp_path / "__artifacts__"))
