import os
import random

import pytest
from fastapi.testclient import TestClient

# Force use of test settings
os.environ["APP_ENV"] = "test"

from app.main import app
from app.core.config import settings
from app.graphs.colored_graph import ColoredGraph
from tests.utils.graph_factory import GraphFactory


@pytest.fixture(scope="function")
def output_dir(tmp_path, monkeypatch):
    """Point OUTPUT_DIR at a per-test directory"""
    monkeypatch.setattr(settings, "OUTPUT_DIR", str(tmp_path))
    return tmp_path


@pytest.fixture(scope="function")
def client(output_dir):
    """Test client fixture"""
    with TestClient(app) as test_client:
        yield test_client


@pytest.fixture
def factory() -> GraphFactory:
    """Graph factory fixture"""
    return GraphFactory()


@pytest.fixture
def p4() -> ColoredGraph:
    """P4 as a-b-c-d = 0-1-2-3"""
    return GraphFactory.path(4)


@pytest.fixture
def c5() -> ColoredGraph:
    return GraphFactory.cycle(5)


@pytest.fixture
def k4() -> ColoredGraph:
    return GraphFactory.complete(4)


@pytest.fixture
def p3_plus_k1() -> ColoredGraph:
    """P3 on 0-1-2 and an isolated vertex 3"""
    return ColoredGraph(4, [(0, 1), (1, 2)])


@pytest.fixture
def rng() -> random.Random:
    """Seeded random source"""
    return random.Random(20240601)
