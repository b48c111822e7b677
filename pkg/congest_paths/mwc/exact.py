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

"""Exact minimum weight cycles and shortest cycles through every node."""

from __future__ import annotations

from ..congest.simulator import (
    Session,
    SimConfig,
    decode_optional,
    encode_optional,
)
from ..graph.graph import Graph, saturating_add
from ..primitives.aggregate import broadcast_aggregate
from ..primitives.apsp import ApspTable, apsp
from ..primitives.bfs import bfs_tree
from ..primitives.exchange import exchange
from .result import CycleResult, CycleWitness, Weight


def _first_hop(table: ApspTable, u: int, v: int) -> int | None:
    """First(u, v), which is u itself for v = u."""
    if u == v:
        return u
    entry = table.entry(u, v)
    return None if entry is None else entry.first


def _global_minimum(
    session: Session,
    values: list[tuple[int, int]],
    label: str,
) -> tuple[int, int]:
    """Let every node know the smallest (weight, node) pair."""
    tree = bfs_tree(session, 0, label=f"bfs-{label}")
    (best,) = broadcast_aggregate(
        session, tree, [[value] for value in values], "min", label=label
    )
    return best[0], best[1]


def mwc_directed(
    graph: Graph,
    *,
    config: SimConfig | None = None,
    session: Session | None = None,
) -> CycleResult:
    """Close the shortest path from x to y with every incoming arc (y, x).

    All pairs shortest paths run on the reversed graph, so x knows δ(x, y)
    and its next hop towards y for every y.
    """
    graph.require("mwc-dir", directed=True)
    session = Session.attach(graph, config, session, name="mwc-dir")
    table = apsp(session, reverse=True, label="apsp-reversed")
    ansc: list[Weight] = []
    witnesses: list[CycleWitness | None] = []
    values = []
    for x in range(graph.n):
        best = (graph.inf, graph.n)
        for y, weight in graph.in_adj[x].items():
            candidate = saturating_add(table.dist(y, x), weight, inf=graph.inf)
            best = min(best, (candidate, y))
        ansc.append(best[0])
        witnesses.append(
            None if best[0] >= graph.inf else CycleWitness("arc", x, best[1])
        )
        values.append((best[0], x))
    weight, through = _global_minimum(session, values, "mwc-minimum")
    return CycleResult(
        algorithm="mwc-dir",
        weight=weight,
        witness=witnesses[through] if weight < graph.inf else None,
        inf=graph.inf,
        ansc=tuple(ansc),
        witnesses=tuple(witnesses),
        h_cyc=None if graph.weighted or weight >= graph.inf else weight,
        report=session.report(),
        tables={"apsp": table, "reversed": True},
    )


def _valid_triple(
    u: int,
    v: int,
    other: int,
    first: int | None,
    other_first: int | None,
) -> bool:
    """Whether the paths to v and other joined by (v, other) hold a cycle.

    The paths have to leave u over different edges, and the edge (v, other)
    must not be the path to one of them.
    """
    if first is None or other_first is None or first == other_first:
        return False
    if v == u and other_first == other:
        return False
    return not (other == u and first == v)


def mwc_undirected(  # pylint: disable=too-many-locals
    graph: Graph,
    *,
    config: SimConfig | None = None,
    session: Session | None = None,
) -> CycleResult:
    """Find the shortest cycle through every node from neighbouring rows.

    Every node v sends its row (u, δ(u, v), First(u, v)) to its neighbours.
    For a neighbour v′ the closed walk u → v, (v, v′), v′ → u holds a simple
    cycle through u if the paths leave u over different edges.
    """
    graph.require("mwc-undir", directed=False)
    session = Session.attach(graph, config, session, name="mwc-undir")
    table = apsp(session, label="apsp")
    rows = exchange(
        session,
        [
            [
                (u, table.dist(u, v), encode_optional(_first_hop(table, u, v)))
                for u in sorted(table.rows[v])
            ]
            for v in range(graph.n)
        ],
        label="exchange-rows",
    )
    none = (graph.inf, graph.n, graph.n)
    values = []
    for v in range(graph.n):
        best = [none] * graph.n
        for other, row in sorted(rows[v].items()):
            weight = graph.weight(v, other)
            for u, other_dist, other_first in row:
                if (entry_dist := table.dist(u, v)) >= graph.inf:
                    continue
                if not _valid_triple(
                    u,
                    v,
                    other,
                    _first_hop(table, u, v),
                    decode_optional(other_first),
                ):
                    continue
                candidate = (
                    saturating_add(
                        entry_dist, weight, other_dist, inf=graph.inf
                    ),
                    v,
                    other,
                )
                best[u] = min(best[u], candidate)
        values.append(best)
    tree = bfs_tree(session, 0, label="bfs-ansc")
    minima = broadcast_aggregate(
        session, tree, values, "min", label="ansc-minima"
    )
    ansc: list[Weight] = []
    witnesses: list[CycleWitness | None] = []
    for u, (weight, v, other) in enumerate(minima):
        ansc.append(weight)
        witnesses.append(
            None
            if weight >= graph.inf
            else CycleWitness("triple", u, v, other)
        )
    through = min(range(graph.n), key=lambda u: (ansc[u], u))
    weight = ansc[through]
    return CycleResult(
        algorithm="mwc-undir",
        weight=weight,
        witness=witnesses[through],
        inf=graph.inf,
        ansc=tuple(ansc),
        witnesses=tuple(witnesses),
        h_cyc=None if graph.weighted or weight >= graph.inf else weight,
        report=session.report(),
        tables={"apsp": table, "reversed": False},
    )


def ansc(
    graph: Graph,
    *,
    config: SimConfig | None = None,
    session: Session | None = None,
) -> CycleResult:
    """Compute the shortest cycle through every node of any graph."""
    if graph.directed:
        return mwc_directed(graph, config=config, session=session)
    return mwc_undirected(graph, config=config, session=session)
