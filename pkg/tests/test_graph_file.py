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

"""The tests for reading and writing graph files."""

from __future__ import annotations

from pathlib import Path

import pytest

from congest_paths.errors import (
    DisconnectedGraphError,
    EdgeCountMismatchError,
    InvalidPathError,
    MalformedEdgeError,
    MalformedHeaderError,
)
from congest_paths.graph.graph_file import (
    dump_graph,
    dump_path,
    load_graph,
    load_path,
    parse_graph,
    parse_path,
    save_graph,
)

from . import ladder, shortest_path

WEIGHTED = """\
# a weighted triangle with a tail
4 4 undirected weighted
0 1 2
1 2 2  # the light side
0 2 5
2 3 1
"""


def test_parse_graph() -> None:
    """Test parsing a graph with comments."""
    graph = parse_graph(WEIGHTED)
    assert graph.n == 4
    assert not graph.directed
    assert graph.weighted
    assert graph.edges == ((0, 1, 2), (0, 2, 5), (1, 2, 2), (2, 3, 1))


def test_dump_graph() -> None:
    """Test the canonical form of a graph."""
    graph = parse_graph(WEIGHTED)
    assert dump_graph(graph) == (
        "4 4 undirected weighted\n0 1 2\n0 2 5\n1 2 2\n2 3 1\n"
    )
    assert parse_graph(dump_graph(graph)) == graph
    unweighted = parse_graph("3 2 directed unweighted\n2 1\n0 1\n")
    assert dump_graph(unweighted) == "3 2 directed unweighted\n0 1\n2 1\n"


def test_malformed_graphs() -> None:
    """Test that malformed files raise the matching errors."""
    with pytest.raises(MalformedHeaderError):
        parse_graph("")
    with pytest.raises(MalformedHeaderError):
        parse_graph("# only a comment\n")
    with pytest.raises(MalformedHeaderError):
        parse_graph("3 2 sideways unweighted\n0 1\n1 2\n")
    with pytest.raises(MalformedEdgeError):
        parse_graph("3 2 undirected unweighted\n0 1\n1 x\n")
    with pytest.raises(MalformedEdgeError):
        # weights are not allowed in unweighted files
        parse_graph("3 2 undirected unweighted\n0 1 1\n1 2 1\n")
    with pytest.raises(MalformedEdgeError):
        parse_graph("3 2 undirected weighted\n0 1 1\n1 2\n")
    with pytest.raises(EdgeCountMismatchError):
        parse_graph("3 3 undirected unweighted\n0 1\n1 2\n")
    with pytest.raises(DisconnectedGraphError):
        parse_graph("4 2 undirected unweighted\n0 1\n2 3\n")


def test_paths() -> None:
    """Test parsing and dumping paths."""
    graph = ladder()
    path = parse_path("# s to t\n0 1\n2 3\n", graph)
    assert path.vertices == (0, 1, 2, 3)
    assert dump_path(path) == "0 1 2 3\n"
    assert shortest_path(graph, 0, 3) == path
    with pytest.raises(InvalidPathError):
        parse_path("0 a 2", graph)
    with pytest.raises(InvalidPathError):
        parse_path("0 4 5 1", graph)


def test_files(tmp_path: Path) -> None:
    """Test saving and loading graphs and paths."""
    graph = parse_graph(WEIGHTED)
    graph_file = tmp_path / "triangle.txt"
    save_graph(graph, graph_file)
    assert load_graph(graph_file) == graph
    path_file = tmp_path / "triangle.path"
    path_file.write_text("0 1 2 3\n", encoding="UTF-8")
    path = load_path(path_file, graph)
    assert path.delta_st == 5
    with pytest.raises(FileNotFoundError):
        load_graph(tmp_path / "missing.txt")
