"""Shared fixtures: isolated settings, small named graphs, a seeded generator."""

from pathlib import Path

import numpy as np
import pytest

from turan_lab.core.config import Settings, get_settings
from turan_lab.core.families import clique, cycle, turan
from turan_lab.core.graph import Graph
from turan_lab.extremal.record_store import RecordStore


@pytest.fixture(autouse=True)
def _isolated_environment(tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
    """Keep every test's cache and reports under its own temporary directory."""
    monkeypatch.delenv("LAB_CACHE_DIR", raising=False)
    monkeypatch.setenv("LAB_OUTPUT_DIR", str(tmp_path / "reports"))
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def settings(tmp_path: Path) -> Settings:
    return Settings(cache_dir=tmp_path / "cache", output_dir=tmp_path / "reports")


@pytest.fixture
def store(settings: Settings) -> RecordStore:
    return RecordStore(settings)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def k3() -> Graph:
    return clique(3)


@pytest.fixture
def k4() -> Graph:
    return clique(4)


@pytest.fixture
def c5() -> Graph:
    return cycle(5)


@pytest.fixture
def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


@pytest.fixture
def t3_6() -> Graph:
    return turan(3, 6)


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    keep = rng.random(len(pairs)) < p
    return Graph.from_edges(n, (e for e, k in zip(pairs, keep) if k))
