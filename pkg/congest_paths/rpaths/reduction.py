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

"""The reduction of directed replacement paths to shortest paths.

For every edge (v_j, v_j+1) of the input path there are two virtual
vertices z_jo, hosted by v_j, and z_ji, hosted by v_j+1. The path edges are
removed and the arcs

* (z_jo, v_j) with weight δ(s, v_j),
* (v_j+1, z_ji) with weight δ(v_j+1, t),
* (z_ji, z_jo) and (z_j+1o, z_ji) with weight 0

are added. The distance from z_jo to z_ji is the replacement path weight
of the edge (v_j, v_j+1).
"""

from __future__ import annotations

from collections.abc import Sequence

from ..graph.graph import Edge, Graph, PathSpec
from ..primitives.apsp import Overlay


def z_out(graph: Graph, index: int) -> int:
    """The id of the virtual vertex z_jo."""
    return graph.n + 2 * index


def z_in(graph: Graph, index: int) -> int:
    """The id of the virtual vertex z_ji."""
    return graph.n + 2 * index + 1


def reduction_arcs(
    graph: Graph,
    path: PathSpec,
    from_s: Sequence[int],
    to_t: Sequence[int],
) -> list[Edge]:
    """The arcs added for the virtual vertices."""
    vertices = path.vertices
    arcs: list[Edge] = []
    for j in range(path.h_st):
        arcs.append((z_out(graph, j), vertices[j], from_s[vertices[j]]))
        arcs.append((vertices[j + 1], z_in(graph, j), to_t[vertices[j + 1]]))
        arcs.append((z_in(graph, j), z_out(graph, j), 0))
        if j + 1 < path.h_st:
            arcs.append((z_out(graph, j + 1), z_in(graph, j), 0))
    return arcs


def build_overlay(
    graph: Graph,
    path: PathSpec,
    from_s: Sequence[int],
    to_t: Sequence[int],
) -> Overlay:
    """Build the virtual part of the reduction graph.

    Every arc is local to v_j or joins v_j and v_j+1, so the overlay can be
    simulated on the network.
    """
    host: dict[int, int] = {}
    for j in range(path.h_st):
        host[z_out(graph, j)] = path.vertices[j]
        host[z_in(graph, j)] = path.vertices[j + 1]
    return Overlay(
        host=host,
        arcs=tuple(reduction_arcs(graph, path, from_s, to_t)),
        removed=frozenset(path.edges),
    )


def materialize(
    graph: Graph,
    path: PathSpec,
    from_s: Sequence[int],
    to_t: Sequence[int],
) -> Graph:
    """Build the reduction graph as a plain directed graph."""
    if not graph.directed:
        raise ValueError("The reduction is only defined for directed graphs")
    removed = set(path.edges)
    return Graph.build(
        graph.n + 2 * path.h_st,
        [
            *(edge for edge in graph.edges if edge[:2] not in removed),
            *reduction_arcs(graph, path, from_s, to_t),
        ],
        directed=True,
        weighted=True,
        check_connected=False,
    )
