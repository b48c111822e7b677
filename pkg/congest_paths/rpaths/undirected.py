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

"""Replacement paths in undirected graphs.

Every replacement path can be chosen as P_s(s,u)∘P_t(u,t) for a vertex u or
as P_s(s,u)∘(u,v)∘P_t(v,t) for an edge (u,v) that is not on the input path,
where P_s and P_t are the shortest path trees of s and t. Such a path avoids
exactly the path edges from α(u) to β(u) (or β(v)), where α(u) is the last
path vertex on P_s(s,u) and β(u) the first one on P_t(u,t).
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Final

from ..congest.simulator import Session, SimConfig, SimReport
from ..graph.graph import Graph, PathSpec, saturating_add
from ..primitives.aggregate import broadcast_aggregate
from ..primitives.bfs import bfs_tree
from ..primitives.exchange import exchange
from ..primitives.sssp import SsspResult, sssp
from .result import RPathsResult, Weight, Witness

VERTEX: Final[int] = 0
EDGE: Final[int] = 1

type Candidate = tuple[int, int, int, int, int]


@dataclass(frozen=True, slots=True)
class UndirCandidates:
    """The candidates of every node with the range of path edges they avoid.

    A candidate is (weight, hops, kind, u, v) and avoids the edges j with
    start <= j < end.
    """

    from_s: SsspResult
    to_t: SsspResult
    candidates: tuple[tuple[tuple[Candidate, int, int], ...], ...]


@dataclass(frozen=True, slots=True)
class Sisp2Result:
    """The second simple shortest path weight with its witness."""

    weight: int
    witness: Witness | None
    hops: int | None
    inf: int
    report: SimReport | None = None


def undirected_candidates(
    session: Session, path: PathSpec
) -> UndirCandidates:
    """Build both trees, exchange the t side and list all candidates.

    Ties in both trees prefer the neighbour on the input path, so the input
    path is part of both trees.
    """
    graph = session.graph
    vertices = path.vertices
    from_s = sssp(
        session,
        path.s,
        anchors=vertices,
        preferred=dict(zip(vertices[1:], vertices)),
        label="sssp-from-s",
    )
    to_t = sssp(
        session,
        path.t,
        anchors=vertices,
        preferred=dict(zip(vertices, vertices[1:])),
        label="sssp-from-t",
    )
    index = {v: j for j, v in enumerate(vertices)}
    alpha = [None if x is None else index[x] for x in from_s.anchor]
    beta = [None if x is None else index[x] for x in to_t.anchor]
    received = exchange(
        session,
        [
            [
                (
                    to_t.dist[u],
                    path.h_st + 1 if beta[u] is None else beta[u],
                    to_t.hops[u],
                )
            ]
            for u in range(graph.n)
        ],
        label="exchange-t-side",
    )
    path_edges = frozenset(path.edges) | {(v, u) for u, v in path.edges}
    rows = []
    for u in range(graph.n):
        row: list[tuple[Candidate, int, int]] = []
        a = alpha[u]
        if a is None or from_s.dist[u] >= graph.inf:
            rows.append(())
            continue
        b = beta[u]
        if b is not None and a < b:
            row.append(
                (
                    (
                        saturating_add(
                            from_s.dist[u], to_t.dist[u], inf=graph.inf
                        ),
                        from_s.hops[u] + to_t.hops[u],
                        VERTEX,
                        u,
                        u,
                    ),
                    a,
                    b,
                )
            )
        for v, items in sorted(received[u].items()):
            ((dist_vt, b_v, hops_vt),) = items
            if (u, v) in path_edges or a >= b_v or dist_vt >= graph.inf:
                continue
            row.append(
                (
                    (
                        saturating_add(
                            from_s.dist[u],
                            graph.weight(u, v),
                            dist_vt,
                            inf=graph.inf,
                        ),
                        from_s.hops[u] + 1 + hops_vt,
                        EDGE,
                        u,
                        v,
                    ),
                    a,
                    b_v,
                )
            )
        rows.append(tuple(row))
    return UndirCandidates(from_s=from_s, to_t=to_t, candidates=tuple(rows))


def _witness(candidate: Sequence[int]) -> Witness:
    _, _, kind, u, v = candidate
    if kind == VERTEX:
        return Witness("vertex", u)
    return Witness("edge", u, v)


def rpaths_undirected(
    graph: Graph,
    path: PathSpec,
    *,
    config: SimConfig | None = None,
    session: Session | None = None,
) -> RPathsResult:
    """Compute the replacement paths from the candidates of all nodes.

    The minimum of every edge is found by one pipelined aggregation of
    h_st values over a BFS tree.
    """
    graph.require("rp-undir", directed=False)
    session = Session.attach(graph, config, session, name="rp-undir")
    found = undirected_candidates(session, path)
    none: Candidate = (graph.inf, graph.inf, EDGE, graph.n, graph.n)
    values = []
    for row in found.candidates:
        best = [none] * path.h_st
        for candidate, start, end in row:
            for j in range(start, min(end, path.h_st)):
                best[j] = min(best[j], candidate)
        values.append(best)
    tree = bfs_tree(session, path.s, label="bfs-from-s")
    minima = broadcast_aggregate(
        session, tree, values, "min", label="candidate-minima"
    )
    weights: list[Weight] = []
    witnesses: list[Witness | None] = []
    hops = [0]
    for candidate in minima:
        if candidate[0] >= graph.inf:
            weights.append(graph.inf)
            witnesses.append(None)
            continue
        weights.append(candidate[0])
        witnesses.append(_witness(candidate))
        hops.append(candidate[1])
    return RPathsResult(
        algorithm="rp-undir",
        path=path,
        weights=tuple(weights),
        witnesses=tuple(witnesses),
        inf=graph.inf,
        report=session.report(),
        h_rep=max(hops),
        trees={"from_s": found.from_s, "to_t": found.to_t},
    )


def sisp2_undirected(
    graph: Graph,
    path: PathSpec,
    *,
    config: SimConfig | None = None,
    session: Session | None = None,
) -> Sisp2Result:
    """Find only the lightest replacement path with a single global minimum."""
    graph.require("rp-undir", directed=False)
    session = Session.attach(graph, config, session, name="sisp2-undir")
    found = undirected_candidates(session, path)
    none: Candidate = (graph.inf, graph.inf, EDGE, graph.n, graph.n)
    values = [
        [min((candidate for candidate, _, _ in row), default=none)]
        for row in found.candidates
    ]
    tree = bfs_tree(session, path.s, label="bfs-from-s")
    (best,) = broadcast_aggregate(
        session, tree, values, "min", label="global-minimum"
    )
    if best[0] >= graph.inf:
        return Sisp2Result(
            weight=graph.inf,
            witness=None,
            hops=None,
            inf=graph.inf,
            report=session.report(),
        )
    return Sisp2Result(
        weight=best[0],
        witness=_witness(best),
        hops=best[1],
        inf=graph.inf,
        report=session.report(),
    )
