# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as
# published by the Free Software Foundation, either version 3 of the
# License, or (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.
#
# You should have received a copy of the GNU Affero General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

"""The tests for the sequential shortest path routines."""

from __future__ import annotations

import networkx as nx

from congest_paths.graph.graph import Graph, random_graph
from congest_paths.graph.oracle import (
    bellman_ford,
    bfs,
    dijkstra,
    shortest_path_oracle,
)

from . import cycle_graph, ladder


def to_networkx(graph: Graph) -> nx.Graph | nx.DiGraph:
    """Convert a graph for a comparison with networkx."""
    result = nx.DiGraph() if graph.directed else nx.Graph()
    result.add_nodes_from(range(graph.n))
    result.add_weighted_edges_from(graph.edges)
    return result


def test_dijkstra_against_networkx() -> None:
    """Test Dijkstra and Bellman-Ford on random graphs."""
    for seed in range(6):
        for directed in (False, True):
            graph = random_graph(
                14,
                0.25,
                weighted=True,
                directed=directed,
                max_weight=20,
                seed=seed,
            )
            expected = nx.single_source_dijkstra_path_length(
                to_networkx(graph), 0
            )
            result = dijkstra(graph, 0)
            for v in range(graph.n):
                want = expected.get(v, graph.inf)
                assert result.dist[v] == want
                if v and want < graph.inf:
                    parent = result.parent[v]
                    assert parent is not None
                    assert result.dist[parent] + graph.weight(parent, v) == want
            assert bellman_ford(graph, 0) == result.dist


def test_dijkstra_reverse() -> None:
    """Test distances towards the source."""
    graph = cycle_graph(5, directed=True, weights=(1, 2, 3, 4, 5))
    towards = dijkstra(graph, 0, reverse=True)
    # 1 → 2 → 3 → 4 → 0
    assert towards.dist == [0, 14, 12, 9, 5]
    assert dijkstra(graph, 0).dist == [0, 1, 3, 6, 10]


def test_fewest_hops() -> None:
    """Test that ties are broken towards fewer hops, then smaller parents."""
    graph = Graph.build(
        4,
        [(0, 1, 1), (1, 3, 1), (0, 3, 2), (0, 2, 1), (2, 3, 1)],
        directed=True,
        weighted=True,
    )
    result = dijkstra(graph, 0)
    assert result.dist[3] == 2
    assert result.hops[3] == 1
    assert result.parent[3] == 0
    graph = ladder()
    assert dijkstra(graph, 0).parent[5] == 1


def test_bfs() -> None:
    """Test hop distances along arcs."""
    graph = cycle_graph(4, directed=True)
    assert bfs(graph, 1) == [3, 0, 1, 2]
    graph = Graph.build(3, [(0, 1), (2, 1)], directed=True, weighted=False)
    assert bfs(graph, 0) == [0, 1, graph.inf]


def test_shortest_path_oracle() -> None:
    """Test the canonical shortest path."""
    graph = ladder()
    assert shortest_path_oracle(graph, 0, 7) == (4, [0, 1, 2, 3, 7])
    assert shortest_path_oracle(graph, 4, 3) == (4, [4, 0, 1, 2, 3])
    graph = Graph.build(3, [(0, 1), (2, 1)], directed=True, weighted=False)
    assert shortest_path_oracle(graph, 0, 2) == (graph.inf, [])
    zero = Graph.build(
        3, [(0, 1, 0), (1, 2, 0), (0, 2, 0)], directed=False, weighted=True
    )
    assert shortest_path_oracle(zero, 0, 2) == (0, [0, 2])
