"""
Shared fixtures: sample diagrams from app/resources/diagrams.
"""
import sys
from pathlib import Path

import pytest

# Same path setup as app/main.py so "app.*" imports work
PROJECT_ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from app.services import diagram_service
from app.utils.config import DIAGRAMS_DIR


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: corpus-scale runs; deselect with -m \"not slow\"")


def _text(name: str) -> str:
    return (DIAGRAMS_DIR / f"{name}.txt").read_text(encoding='utf-8')


@pytest.fixture
def load_text():
    return _text


@pytest.fixture
def diagram_path():
    return lambda name: DIAGRAMS_DIR / f"{name}.txt"


@pytest.fixture
def unknot():
    return diagram_service.parse_link(_text('unknot'))


@pytest.fixture
def trefoil():
    return diagram_service.parse_link(_text('trefoil'))


@pytest.fixture
def figure8():
    return diagram_service.parse_link(_text('figure8'))


@pytest.fixture
def hopf():
    return diagram_service.parse_link(_text('hopf'))


@pytest.fixture
def whitehead():
    return diagram_service.parse_link(_text('whitehead'))


@pytest.fixture
def unlink2():
    return diagram_service.parse_link("link n=2\ncomponent 1: 1\ncomponent 2: 2\n")


@pytest.fixture
def trefoil_spine():
    return diagram_service.parse_spine(_text('trefoil_spine'))


@pytest.fixture
def hopf_spine():
    return diagram_service.parse_spine(_text('hopf_spine'))


@pytest.fixture
def standard_g2():
    return diagram_service.parse_spine(_text('standard_g2'))


@pytest.fixture
def arc_spine():
    return diagram_service.parse_spine(_text('arc_crossing_spine'))


@pytest.fixture
def round_spine():
    return diagram_service.parse_spine("spine g=1\nloop 1: 1\narc 1: 2\nwedge: 2\n")


@pytest.fixture
def triple_edge_text(load_text):
    """Trefoil spine with edge 4 written where edge 3 belongs."""
    return load_text('trefoil_spine').replace("X 3 6 4 7 3 over=d", "X 3 6 4 7 4 over=d")
