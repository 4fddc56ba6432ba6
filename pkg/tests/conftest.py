"""
Shared fixtures: the named graph family and graph files on disk.
"""
import pytest

from app.api.graph_file import format_graph
from app.core.config import get_settings
from app.graph import MultiGraph
from app.services.corpus_service import named_graphs

# dimensions of the perfect matching lattice, |E| - |V| + 2 - b
LATTICE_DIMS = {
    "C4": 2,
    "C6": 2,
    "K4": 3,
    "K33": 5,
    "prism": 4,
    "CL5": 6,
    "petersen": 6,
    "petersen+parallel": 7,
}


@pytest.fixture(scope="session")
def named():
    return named_graphs()


@pytest.fixture
def k4(named):
    return named["K4"]


@pytest.fixture
def c6(named):
    return named["C6"]


@pytest.fixture
def k33(named):
    return named["K33"]


@pytest.fixture
def prism(named):
    return named["prism"]


@pytest.fixture
def petersen(named):
    return named["petersen"]


@pytest.fixture
def path4():
    """0-1-2-3: one perfect matching, the middle edge is inadmissible."""
    return MultiGraph(4, ((0, 1), (1, 2), (2, 3)))


@pytest.fixture
def graph_file(tmp_path):
    """Write a graph (or raw text) to a file and return its path."""

    def write(graph: MultiGraph | str, name: str = "graph.txt") -> str:
        path = tmp_path / name
        path.write_text(graph if isinstance(graph, str) else format_graph(graph))
        return str(path)

    return write


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
