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

"""The tests for the graph module."""

from __future__ import annotations

from fractions import Fraction

import pytest

from congest_paths.errors import (
    ConnectivityRetriesExceeded,
    DisconnectedGraphError,
    DuplicateEdgeError,
    GraphFormatError,
    InvalidPathError,
    NegativeWeightError,
    SelfLoopError,
    UsageError,
    VertexOutOfRangeError,
)
from congest_paths.graph.graph import (
    Graph,
    PathSpec,
    detour_graph,
    random_graph,
    saturating_add,
    scale_weights,
)

from . import cycle_graph, ladder, path_graph


def test_build_undirected() -> None:
    """Test that undirected edges are stored once and in both adjacencies."""
    graph = Graph.build(
        3, [(2, 0, 5), (1, 2, 3)], directed=False, weighted=True
    )
    assert graph.edges == ((0, 2, 5), (1, 2, 3))
    assert graph.m == 2
    assert graph.max_weight == 5
    assert graph.inf == 3 * 5 + 1
    assert graph.has_arc(2, 0) and graph.has_arc(0, 2)
    assert graph.weight(2, 1) == 3
    assert sorted(graph.arcs()) == [
        (0, 2, 5),
        (1, 2, 3),
        (2, 0, 5),
        (2, 1, 3),
    ]
    assert graph.neighbors(2) == [0, 1]


def test_build_directed() -> None:
    """Test that directed arcs only go one way but links are symmetric."""
    graph = cycle_graph(4, directed=True)
    assert graph.has_arc(0, 1)
    assert not graph.has_arc(1, 0)
    assert graph.neighbors(0) == [1, 3]
    assert graph.inf == 5
    reversed_graph = graph.reversed()
    assert reversed_graph.has_arc(1, 0)
    assert not reversed_graph.has_arc(0, 1)
    undirected = cycle_graph(4)
    assert undirected.reversed() is undirected


def test_build_errors() -> None:
    """Test the validation of the edges."""
    with pytest.raises(VertexOutOfRangeError):
        Graph.build(2, [(0, 2)], directed=False, weighted=False)
    with pytest.raises(VertexOutOfRangeError):
        Graph.build(0, [], directed=False, weighted=False)
    with pytest.raises(SelfLoopError):
        Graph.build(2, [(1, 1)], directed=False, weighted=False)
    with pytest.raises(NegativeWeightError):
        Graph.build(2, [(0, 1, -1)], directed=True, weighted=True)
    with pytest.raises(GraphFormatError, match="Unweighted") as info:
        Graph.build(2, [(0, 1, 2)], directed=True, weighted=False)
    assert not isinstance(info.value, NegativeWeightError)
    with pytest.raises(DuplicateEdgeError):
        Graph.build(2, [(0, 1), (1, 0)], directed=False, weighted=False)
    with pytest.raises(DisconnectedGraphError):
        Graph.build(3, [(0, 1)], directed=False, weighted=False)
    # antiparallel arcs are two different edges
    graph = Graph.build(2, [(0, 1), (1, 0)], directed=True, weighted=False)
    assert graph.m == 2
    assert not Graph.build(
        3, [(0, 1)], directed=False, weighted=False, check_connected=False
    ).is_connected()


def test_zero_weights() -> None:
    """Test that weights of zero are allowed and keep the sentinel sane."""
    graph = Graph.build(
        3, [(0, 1, 0), (1, 2, 0)], directed=False, weighted=True
    )
    assert graph.max_weight == 1
    assert graph.inf == 4


def test_require() -> None:
    """Test the graph class checks of the algorithms."""
    graph = cycle_graph(4, directed=True)
    graph.require("x", directed=True, weighted=False)
    graph.require("x")
    with pytest.raises(UsageError, match="undirected"):
        graph.require("x", directed=False)
    with pytest.raises(UsageError, match="weighted"):
        graph.require("x", weighted=True)


def test_hop_diameter() -> None:
    """Test the diameter of the communication network."""
    assert path_graph(5).hop_diameter() == 4
    assert cycle_graph(6).hop_diameter() == 3
    # direction does not matter for the links
    assert cycle_graph(6, directed=True).hop_diameter() == 3
    assert ladder().hop_diameter() == 4
    assert path_graph(4).link_distances(1) == [1, 0, 1, 2]


def test_without_arcs() -> None:
    """Test removing edges given in any orientation."""
    graph = cycle_graph(4)
    without = graph.without_arcs([(1, 0)])
    assert without.m == 3
    assert not without.has_arc(0, 1)
    assert without.is_connected()
    directed = cycle_graph(4, directed=True).without_arcs([(1, 0)])
    assert directed.m == 4


def test_saturating_add() -> None:
    """Test that distances never exceed the sentinel."""
    assert saturating_add(1, 2, inf=10) == 3
    assert saturating_add(4, 10, inf=10) == 10
    assert saturating_add(6, 6, inf=10) == 10
    assert saturating_add(inf=10) == 0


def test_path_spec() -> None:
    """Test building and validating paths."""
    graph = ladder()
    path = PathSpec.from_vertices(graph, [0, 1, 2, 3])
    assert path.h_st == 3
    assert path.delta_st == 3
    assert (path.s, path.t) == (0, 3)
    assert path.edges == ((0, 1), (1, 2), (2, 3))
    assert path.index(2) == 2
    assert path.index(5) is None
    assert path.prefix_weights(graph) == [0, 1, 2, 3]
    with pytest.raises(InvalidPathError, match="shortest"):
        PathSpec.from_vertices(graph, [0, 4, 5, 1])
    detour = PathSpec.from_vertices(graph, [0, 4, 5, 1], check_shortest=False)
    assert detour.delta_st == 3
    with pytest.raises(InvalidPathError, match="misses"):
        PathSpec.from_vertices(graph, [0, 2])
    with pytest.raises(InvalidPathError, match="simple"):
        PathSpec.from_vertices(graph, [0, 1, 0])
    with pytest.raises(InvalidPathError, match="two vertices"):
        PathSpec.from_vertices(graph, [0])


def test_detour_graph() -> None:
    """Test the path with a single long detour."""
    graph, path = detour_graph(8, 2)
    assert graph.directed
    assert not graph.weighted
    assert path.vertices == (0, 1, 2)
    assert path.delta_st == 2
    assert graph.has_arc(0, 3)
    assert graph.has_arc(7, 2)
    assert graph.m == 2 + 6
    weighted, _ = detour_graph(8, 2, 5)
    assert weighted.weighted
    assert weighted.weight(3, 4) == 5
    assert weighted.weight(0, 1) == 1
    for args in ((4, 2, None), (8, 0, None), (8, 2, 0)):
        with pytest.raises(ValueError):
            detour_graph(*args)


def test_random_graph() -> None:
    """Test that random graphs are connected and deterministic."""
    for directed in (False, True):
        first = random_graph(
            12, 0.3, weighted=True, directed=directed, max_weight=9, seed=3
        )
        second = random_graph(
            12, 0.3, weighted=True, directed=directed, max_weight=9, seed=3
        )
        assert first == second
        assert first.is_connected()
        assert first.directed is directed
        assert all(1 <= w <= 9 for *_, w in first.edges)
    assert random_graph(12, 0.3, seed=1) != random_graph(12, 0.3, seed=2)
    assert random_graph(5, 1.0).m == 10
    with pytest.raises(ValueError):
        random_graph(5, 0)
    with pytest.raises(ValueError):
        random_graph(5, 1.5)
    with pytest.raises(ConnectivityRetriesExceeded):
        random_graph(40, 0.001)


def test_scale_weights() -> None:
    """Test the rounding up of scaled weights."""
    graph = cycle_graph(3, weights=(1, 5, 9))
    scaled = scale_weights(graph, 1, Fraction(1, 2), 2)
    # factor 2·2 / (1/2 · 2) = 4
    assert [w for *_, w in scaled.edges] == [4, 36, 20]
    scaled = scale_weights(graph, 3, Fraction(1), 1)
    # factor 2 / 8 = 1/4
    assert [w for *_, w in scaled.edges] == [1, 3, 2]
    with pytest.raises(ValueError):
        scale_weights(cycle_graph(3), 1, Fraction(1), 1)
    with pytest.raises(ValueError):
        scale_weights(graph, 0, Fraction(1), 1)


if __name__ == "__main__":
    test_build_undirected()
    test_build_directed()
    test_build_errors()
    test_zero_weights()
    test_require()
    test_hop_diameter()
    test_without_arcs()
    test_saturating_add()
    test_path_spec()
    test_random_graph()
    test_scale_weights()
