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

"""Sequential shortest path routines used for validation."""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass

from .graph import Graph


@dataclass(frozen=True, slots=True)
class ShortestPaths:
    """Distances from (or to) one vertex with a shortest path tree."""

    source: int
    dist: list[int]
    hops: list[int]
    parent: list[int | None]


def bellman_ford(graph: Graph, source: int) -> list[int]:
    """Compute distances from source by relaxing every arc n-1 times."""
    inf = graph.inf
    dist = [inf] * graph.n
    dist[source] = 0
    arcs = list(graph.arcs())
    for _ in range(graph.n - 1):
        changed = False
        for u, v, w in arcs:
            if dist[u] < inf and dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                changed = True
        if not changed:
            break
    return dist


def bfs(graph: Graph, source: int) -> list[int]:
    """Hop distances along arcs; unreachable vertices get the sentinel."""
    dist = [graph.inf] * graph.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in sorted(graph.out_adj[u]):
            if dist[v] == graph.inf:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def dijkstra(
    graph: Graph, source: int, *, reverse: bool = False
) -> ShortestPaths:
    """Run Dijkstra from source, or towards source if reverse is set.

    Among shortest paths the one with fewest hops wins, then the smaller
    predecessor id.
    """
    adj = graph.in_adj if reverse else graph.out_adj
    inf = graph.inf
    dist = [inf] * graph.n
    hops = [inf] * graph.n
    parent: list[int | None] = [None] * graph.n
    dist[source] = hops[source] = 0
    heap = [(0, 0, source)]
    done = [False] * graph.n
    while heap:
        d, h, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in adj[u].items():
            if done[v]:
                continue
            key = (d + w, h + 1)
            current = (dist[v], hops[v])
            if key < current or (
                key == current and parent[v] is not None and u < parent[v]
            ):
                dist[v], hops[v] = key
                parent[v] = u
                heapq.heappush(heap, (d + w, h + 1, v))
    return ShortestPaths(source, dist, hops, parent)


def shortest_path_oracle(
    graph: Graph, s: int, t: int  # pylint: disable=invalid-name
) -> tuple[int, list[int]]:
    """Return the weight of a shortest s-t path and the path itself.

    The path prefers the smallest next-hop id at every vertex. If t cannot
    be reached, the sentinel and an empty list are returned.
    """
    to_t = dijkstra(graph, t, reverse=True)
    if to_t.dist[s] >= graph.inf:
        return graph.inf, []
    path = [s]
    u = s
    while u != t:
        u = min(
            v
            for v, w in graph.out_adj[u].items()
            if w + to_t.dist[v] == to_t.dist[u]
            and (w > 0 or to_t.hops[v] < to_t.hops[u])
        )
        path.append(u)
    return to_t.dist[s], path
