import networkx as nx
import numpy as np
import pytest

from fastgraphlet import SanitizeOptions, SparseAdjacency, build_adjacency, parse_edge_list

WORKED_EDGES = "6 4\n4 5\n5 1\n1 2\n2 5\n2 3\n3 4\n3 5\n2 4\n"

# Top and bottom tables of the worked 6-vertex example, rows are vertices 1..6.
WORKED_RAW = np.array([
    [1, 2, 6, 1, 1, 14, 4, 6, 0, 6, 4, 0, 2, 2, 0, 0],
    [1, 4, 9, 6, 4, 12, 19, 7, 4, 3, 12, 8, 5, 3, 5, 1],
    [1, 3, 9, 3, 3, 14, 12, 9, 1, 5, 12, 3, 4, 4, 3, 1],
    [1, 4, 8, 6, 3, 12, 18, 7, 4, 5, 10, 6, 4, 4, 3, 1],
    [1, 4, 9, 6, 4, 12, 19, 7, 4, 3, 12, 8, 5, 3, 5, 1],
    [1, 1, 3, 0, 0, 8, 0, 3, 0, 3, 0, 0, 0, 0, 0, 0],
])
WORKED_NET = np.array([
    [1, 2, 4, 0, 1, 2, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0],
    [1, 4, 1, 2, 4, 0, 1, 0, 0, 0, 2, 1, 0, 0, 2, 1],
    [1, 3, 3, 0, 3, 0, 0, 0, 0, 0, 4, 0, 0, 1, 0, 1],
    [1, 4, 2, 3, 3, 0, 2, 0, 0, 0, 2, 3, 0, 1, 0, 1],
    [1, 4, 1, 2, 4, 0, 1, 0, 0, 0, 2, 1, 0, 0, 2, 1],
    [1, 1, 3, 0, 0, 2, 0, 0, 0, 3, 0, 0, 0, 0, 0, 0],
])


def from_nx(G) -> SparseAdjacency:
    G = nx.convert_node_labels_to_integers(G)
    return SparseAdjacency.from_edges(G.number_of_nodes(), G.edges())


@pytest.fixture(scope="session")
def worked():
    return build_adjacency(parse_edge_list(WORKED_EDGES), SanitizeOptions(symmetrize=True))


def path_graph(n):
    return SparseAdjacency.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n):
    return from_nx(nx.complete_graph(n))


def cycle_graph(n):
    return from_nx(nx.cycle_graph(n))


def star_graph(leaves):
    return SparseAdjacency.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
