import math

import pytest

from constants import ENV_HOME, ENV_WORKERS
from core.percolation import build_disk_lattice


@pytest.fixture(autouse=True)
def isolated_home(tmp_path, monkeypatch):
    """Keep logs, prefs and saved tables out of the real data dir."""
    monkeypatch.setenv(ENV_HOME, str(tmp_path))
    monkeypatch.delenv(ENV_WORKERS, raising=False)
    return tmp_path


@pytest.fixture(scope="session")
def micro_lattice():
    """delta = 1.2, no margin: the origin hexagon, its ring of 6, 12 outside."""
    return build_disk_lattice(1.2, 0.0)


@pytest.fixture(scope="session")
def small_lattice():
    return build_disk_lattice(1.0 / 20.0)


@pytest.fixture(scope="session")
def tiny_lattice():
    return build_disk_lattice(0.3, 0.3)


QUARTER, HALF, THREE_QUARTER = math.pi / 2, math.pi, 3 * math.pi / 2
