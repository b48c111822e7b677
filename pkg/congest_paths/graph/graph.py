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

"""The graph and path types shared by all other modules."""

from __future__ import annotations

import logging
import math
import random
from collections import deque
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Final

from ..errors import (
    ConnectivityRetriesExceeded,
    DisconnectedGraphError,
    DuplicateEdgeError,
    GraphFormatError,
    InvalidPathError,
    NegativeWeightError,
    SelfLoopError,
    UsageError,
    VertexOutOfRangeError,
    WeightOverflowError,
)

LOGGER: Final = logging.getLogger(__name__)

CONNECTIVITY_RETRIES: Final[int] = 64
SENTINEL_LIMIT: Final[int] = 1 << 63

type Edge = tuple[int, int, int]


def saturating_add(*values: int, inf: int) -> int:
    """Add distances, treating everything at or above inf as infinite."""
    total = 0
    for value in values:
        if value >= inf:
            return inf
        total += value
    return min(total, inf)


@dataclass(frozen=True, slots=True)
class Graph:  # pylint: disable=too-many-instance-attributes
    """A simple graph on the vertices 0..n-1.

    Undirected edges are stored once with u < v. The adjacency maps are
    symmetric for undirected graphs.
    """

    n: int
    directed: bool
    weighted: bool
    edges: tuple[Edge, ...]
    max_weight: int
    out_adj: tuple[dict[int, int], ...] = field(repr=False, compare=False)
    in_adj: tuple[dict[int, int], ...] = field(repr=False, compare=False)

    @classmethod
    def build(
        cls,
        n: int,
        edges: Iterable[tuple[int, int] | tuple[int, int, int]],
        *,
        directed: bool,
        weighted: bool,
        check_connected: bool = True,
    ) -> Graph:
        """Validate the edges and build a graph."""
        if n < 1:
            raise VertexOutOfRangeError(f"A graph needs a vertex, got n={n!r}")
        out_adj: tuple[dict[int, int], ...] = tuple({} for _ in range(n))
        in_adj: tuple[dict[int, int], ...] = tuple({} for _ in range(n))
        canonical: list[Edge] = []
        for edge in edges:
            u, v = edge[0], edge[1]
            w = edge[2] if len(edge) == 3 else 1  # type: ignore[misc]
            if not (0 <= u < n and 0 <= v < n):
                raise VertexOutOfRangeError(
                    f"Vertex id out of range in edge {(u, v)!r} for n={n!r}"
                )
            if u == v:
                raise SelfLoopError(f"Self-loop at vertex {u!r}")
            if w < 0:
                raise NegativeWeightError(
                    f"Negative weight {w!r} on edge {(u, v)!r}"
                )
            if not weighted and w != 1:
                raise GraphFormatError(
                    f"Unweighted graph with weight {w!r} on edge {(u, v)!r}"
                )
            if not directed and u > v:
                u, v = v, u
            if v in out_adj[u]:
                raise DuplicateEdgeError(f"Duplicate edge {(u, v)!r}")
            out_adj[u][v] = w
            in_adj[v][u] = w
            if not directed:
                out_adj[v][u] = w
                in_adj[u][v] = w
            canonical.append((u, v, w))
        canonical.sort()
        max_weight = max((w for *_, w in canonical), default=1) or 1
        graph = cls(
            n=n,
            directed=directed,
            weighted=weighted,
            edges=tuple(canonical),
            max_weight=max_weight if weighted else 1,
            out_adj=out_adj,
            in_adj=in_adj,
        )
        if check_connected and not graph.is_connected():
            raise DisconnectedGraphError(
                "The underlying undirected graph is not connected"
            )
        return graph

    @property
    def inf(self) -> int:
        """The sentinel that represents an infinite distance."""
        return self.n * self.max_weight + 1

    @property
    def m(self) -> int:
        """The number of edges."""
        return len(self.edges)

    def arcs(self) -> Iterator[Edge]:
        """Iterate over all directed arcs, both directions if undirected."""
        for u, adj in enumerate(self.out_adj):
            for v, w in adj.items():
                yield u, v, w

    def has_arc(self, u: int, v: int) -> bool:
        """Whether (u, v) can be traversed from u to v."""
        return v in self.out_adj[u]

    def hop_diameter(self) -> int:
        """The diameter of the underlying undirected graph in hops."""
        return max(
            max(self.link_distances(source)) for source in range(self.n)
        )

    def is_connected(self) -> bool:
        """Whether the underlying undirected graph is connected."""
        return self.n == 0 or -1 not in self.link_distances(0)

    def link_distances(self, source: int) -> list[int]:
        """BFS hop distances over the communication links, -1 if unreachable."""
        dist = [-1] * self.n
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v in self.neighbors(u):
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return dist

    def neighbors(self, u: int) -> list[int]:
        """All vertices sharing a communication link with u, sorted."""
        return sorted(self.out_adj[u].keys() | self.in_adj[u].keys())

    def require(
        self,
        purpose: str,
        *,
        directed: bool | None = None,
        weighted: bool | None = None,
    ) -> None:
        """Raise a usage error unless the graph is of the requested class."""
        if directed is not None and self.directed != directed:
            kind = "a directed" if directed else "an undirected"
            raise UsageError(f"{purpose!r} needs {kind} graph")
        if weighted is not None and self.weighted != weighted:
            kind = "weighted" if weighted else "unweighted"
            raise UsageError(f"{purpose!r} needs a {kind} graph")

    def reversed(self) -> Graph:
        """The graph with all arcs reversed; links stay the same."""
        if not self.directed:
            return self
        return Graph.build(
            self.n,
            ((v, u, w) for u, v, w in self.edges),
            directed=True,
            weighted=self.weighted,
            check_connected=False,
        )

    def weight(self, u: int, v: int) -> int:
        """The weight of the arc (u, v)."""
        return self.out_adj[u][v]

    def without_arcs(self, arcs: Iterable[tuple[int, int]]) -> Graph:
        """Remove edges; the result may be disconnected."""
        removed = {
            (u, v) if self.directed or u < v else (v, u) for u, v in arcs
        }
        return Graph.build(
            self.n,
            (edge for edge in self.edges if edge[:2] not in removed),
            directed=self.directed,
            weighted=self.weighted,
            check_connected=False,
        )


@dataclass(frozen=True, slots=True)
class PathSpec:
    """A fixed shortest path from s to t."""

    vertices: tuple[int, ...]
    delta_st: int

    @classmethod
    def from_vertices(
        cls,
        graph: Graph,
        vertices: Sequence[int],
        *,
        check_shortest: bool = True,
    ) -> PathSpec:
        """Check that the vertices form a shortest path and build the spec."""
        # pylint: disable-next=import-outside-toplevel, cyclic-import
        from .oracle import dijkstra

        if len(vertices) < 2:
            raise InvalidPathError(f"A path needs two vertices: {vertices!r}")
        if len(set(vertices)) != len(vertices):
            raise InvalidPathError(f"The path is not simple: {vertices!r}")
        weight = 0
        for u, v in zip(vertices, vertices[1:]):
            if not 0 <= u < graph.n or not 0 <= v < graph.n:
                raise InvalidPathError(f"Vertex out of range in {vertices!r}")
            if not graph.has_arc(u, v):
                raise InvalidPathError(f"The path misses the edge {(u, v)!r}")
            weight += graph.weight(u, v)
        if check_shortest:
            dist = dijkstra(graph, vertices[0]).dist[vertices[-1]]
            if dist != weight:
                raise InvalidPathError(
                    f"The path has weight {weight!r}, "
                    f"but the shortest s-t distance is {dist!r}"
                )
        return cls(tuple(vertices), weight)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """The edges (v_j, v_j+1) of the path."""
        return tuple(zip(self.vertices, self.vertices[1:]))

    @property
    def h_st(self) -> int:
        """The number of edges."""
        return len(self.vertices) - 1

    @property
    def s(self) -> int:  # pylint: disable=invalid-name
        """The source."""
        return self.vertices[0]

    @property
    def t(self) -> int:  # pylint: disable=invalid-name
        """The target."""
        return self.vertices[-1]

    def index(self, vertex: int) -> int | None:
        """The position of the vertex on the path."""
        try:
            return self.vertices.index(vertex)
        except ValueError:
            return None

    def prefix_weights(self, graph: Graph) -> list[int]:
        """The weight of the path from s to every v_j."""
        weights = [0]
        for u, v in self.edges:
            weights.append(weights[-1] + graph.weight(u, v))
        return weights


def random_graph(  # pylint: disable=too-many-arguments
    n: int,
    p: float,
    *,
    weighted: bool = False,
    directed: bool = False,
    max_weight: int = 1,
    seed: int = 0,
) -> Graph:
    """Generate a connected Erdős–Rényi style graph deterministically."""
    if not 0 < p <= 1:
        raise ValueError(f"Edge probability must be in (0, 1]: {p!r}")
    if weighted and max_weight < 1:
        raise ValueError(f"Max weight must be positive: {max_weight!r}")
    rng = random.Random(seed)  # nosec: B311
    for attempt in range(CONNECTIVITY_RETRIES):
        edges: list[Edge] = []
        for u in range(n):
            for v in range(n) if directed else range(u + 1, n):
                if u != v and rng.random() < p:
                    edges.append(
                        (u, v, rng.randint(1, max_weight) if weighted else 1)
                    )
        graph = Graph.build(
            n,
            edges,
            directed=directed,
            weighted=weighted,
            check_connected=False,
        )
        if graph.is_connected():
            if attempt:
                LOGGER.debug("Connected graph after %d retries", attempt)
            return graph
    raise ConnectivityRetriesExceeded(
        f"No connected graph with n={n!r}, p={p!r} "
        f"after {CONNECTIVITY_RETRIES} attempts"
    )


def detour_graph(
    n: int, hops: int = 1, weight: int | None = None
) -> tuple[Graph, PathSpec]:
    """Build the directed path 0 → 1 → … → hops and one long detour.

    The detour runs from 0 through hops+1, …, n-1 to hops, so every
    replacement path has n - hops edges. Its arcs carry the weight if one
    is given, which makes the graph weighted.
    """
    if hops < 1 or n - hops <= hops or (weight is not None and weight < 1):
        raise ValueError(
            f"No detour longer than the path: "
            f"n={n!r} h={hops!r} w={weight!r}"
        )
    chain = [0, *range(hops + 1, n), hops]
    edges: list[Edge] = [(u, u + 1, 1) for u in range(hops)]
    edges.extend((u, v, weight or 1) for u, v in zip(chain, chain[1:]))
    graph = Graph.build(
        n, edges, directed=True, weighted=weight is not None
    )
    return graph, PathSpec.from_vertices(graph, range(hops + 1))


def scale_weights(graph: Graph, i: int, eps: Fraction, h: int) -> Graph:
    """Replace every weight w by ⌈2·h·w / (eps·2^i)⌉."""
    if not graph.weighted:
        raise ValueError("Only weighted graphs can be scaled")
    if eps <= 0 or h < 1 or i < 1:
        raise ValueError(f"Invalid scaling level: i={i!r} eps={eps!r} h={h!r}")
    factor = Fraction(2 * h) / (eps * 2**i)
    edges = [(u, v, math.ceil(w * factor)) for u, v, w in graph.edges]
    if graph.n * max((w for *_, w in edges), default=1) + 1 >= SENTINEL_LIMIT:
        raise WeightOverflowError(
            f"Scaling level {i!r} exceeds the sentinel range"
        )
    return Graph.build(
        graph.n,
        edges,
        directed=graph.directed,
        weighted=True,
        check_connected=False,
    )
