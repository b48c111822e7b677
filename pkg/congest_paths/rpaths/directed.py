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

"""Replacement paths in directed graphs."""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Final

from ..congest.simulator import Session, SimConfig
from ..graph.graph import Graph, PathSpec
from ..primitives.aggregate import (
    broadcast_aggregate,
    sample_vertices,
    sampling_probability,
)
from ..primitives.apsp import apsp
from ..primitives.bfs import BfsTree, bfs_tree
from ..primitives.detection import hop_limited_bfs
from ..primitives.sssp import approx_msssp, sssp
from ..utils.utils import ceil_root
from .reduction import build_overlay, z_in, z_out
from .result import RPathsResult, Weight, Witness

LOGGER: Final = logging.getLogger(__name__)


def rpaths_dirw_apsp(
    graph: Graph,
    path: PathSpec,
    *,
    config: SimConfig | None = None,
    session: Session | None = None,
) -> RPathsResult:
    """Compute replacement paths with shortest paths in the reduction graph.

    The witness of every edge is the pair of the first and the last real
    vertex after the virtual source, which are v_a and v_b.
    """
    graph.require("rp-dirw-apsp", directed=True)
    session = Session.attach(graph, config, session, name="rp-dirw-apsp")
    from_s = sssp(session, path.s, label="sssp-from-s")
    to_t = sssp(session, path.t, reverse=True, label="sssp-to-t")
    overlay = build_overlay(graph, path, from_s.dist, to_t.dist)
    table = apsp(
        session,
        overlay,
        sources=[z_out(graph, j) for j in range(path.h_st)],
        label="apsp-reduction",
    )
    weights: list[Weight] = []
    witnesses: list[Witness | None] = []
    for j in range(path.h_st):
        entry = table.entry(z_out(graph, j), z_in(graph, j))
        if entry is None or entry.dist >= graph.inf:
            weights.append(graph.inf)
            witnesses.append(None)
            continue
        assert entry.first is not None and entry.last is not None
        weights.append(entry.dist)
        witnesses.append(Witness("detour", entry.first, entry.last))
    return RPathsResult(
        algorithm="rp-dirw-apsp",
        path=path,
        weights=tuple(weights),
        witnesses=tuple(witnesses),
        inf=graph.inf,
        report=session.report(),
        trees={"from_s": from_s, "to_t": to_t},
    )


def rpaths_iterated_sssp(
    graph: Graph,
    path: PathSpec,
    *,
    config: SimConfig | None = None,
    session: Session | None = None,
) -> RPathsResult:
    """Run one shortest path computation towards t per removed edge.

    The tree of phase j is the routing table for the failure of edge j.
    """
    graph.require("rp-iter-sssp", directed=True)
    session = Session.attach(graph, config, session, name="rp-iter-sssp")
    trees = []
    weights: list[Weight] = []
    for j, edge in enumerate(path.edges):
        tree = sssp(
            session,
            path.t,
            forbidden=[edge],
            reverse=True,
            label=f"sssp-without-{j}",
        )
        trees.append(tree)
        weights.append(tree.dist[path.s])
    hops = [
        tree.hops[path.s] for tree in trees if tree.dist[path.s] < graph.inf
    ]
    return RPathsResult(
        algorithm="rp-iter-sssp",
        path=path,
        weights=tuple(weights),
        witnesses=(None,) * path.h_st,
        inf=graph.inf,
        report=session.report(),
        h_rep=max(hops, default=0),
        trees={"without_edge": tuple(trees)},
    )


def sampling_parameters(n: int, h_st: int) -> tuple[int, int]:
    """Get the hop threshold h and the sample budget p = n/h.

    Short input paths (h_st < n^(1/3)) use h = n^(2/3), long ones use
    h = √(n·h_st).
    """
    if h_st**3 < n:
        hops, budget = ceil_root(n, 2, 3), ceil_root(n, 1, 3)
    else:
        hops = ceil_root(n * h_st, 1, 2)
        budget = math.ceil(math.sqrt(n / h_st))
    return max(1, min(hops, n)), max(1, budget)


@dataclass(frozen=True, slots=True)
class DetourTable:
    """The detours known after the broadcast of the sampled skeleton.

    distances[v] maps every source x to d′(x, v) in G minus the path edges,
    as known at v. detours maps (a, b) to the best found detour weight
    D(v_a, v_b). All weights are multiplied by scale.
    """

    hops: int
    budget: int
    sample: frozenset[int]
    distances: tuple[Mapping[int, int], ...]
    detours: Mapping[tuple[int, int], int]
    scale: int = 1


def skeleton_closure(
    sample: frozenset[int], arcs: Sequence[tuple[int, int, int]]
) -> dict[int, dict[int, int]]:
    """Get the shortest distances using only sampled intermediate vertices."""
    dist: dict[int, dict[int, int]] = {}
    for x, y, d in arcs:
        row = dist.setdefault(x, {})
        if d < row.get(y, d + 1):
            row[y] = d
    for k in sorted(sample):
        row_k = dist.get(k, {})
        for i, row in dist.items():
            if i == k or (d_ik := row.get(k)) is None:
                continue
            for j, d_kj in row_k.items():
                if d_ik + d_kj < row.get(j, d_ik + d_kj + 1):
                    row[j] = d_ik + d_kj
    return dist


def _skeleton_items(
    path: PathSpec,
    sample: frozenset[int],
    distances: Sequence[Mapping[int, int]],
) -> list[list[tuple[int, int, int]]]:
    """The arcs every node adds to the skeleton broadcast."""
    on_path = frozenset(path.vertices)
    items: list[list[tuple[int, int, int]]] = []
    for v, row in enumerate(distances):
        if v in sample:
            items.append([(x, v, d) for x, d in sorted(row.items()) if x != v])
        elif v in on_path:
            items.append(
                [
                    (x, v, d)
                    for x, d in sorted(row.items())
                    if x in sample and x != v
                ]
            )
        else:
            items.append([])
    return items


def _sampled_rpaths(  # pylint: disable=too-many-arguments, too-many-locals
    session: Session,
    tree: BfsTree,
    path: PathSpec,
    params: tuple[int, int],
    sample: frozenset[int],
    distances: Sequence[Mapping[int, int]],
    ends: tuple[Sequence[int], Sequence[int]],
    scale: int,
    ceiling: int,
) -> tuple[DetourTable, list[tuple[int, int, int]]]:
    """Broadcast the skeleton and find the best detour for every edge.

    The prefix and suffix weights of v_j are ends[0][j] and ends[1][j].
    Values at or above the ceiling mean that no detour was found.
    """
    graph = session.graph
    arcs = broadcast_aggregate(
        session,
        tree,
        _skeleton_items(path, sample, distances),
        "concat",
        label="skeleton-broadcast",
    )
    # every node holds the same arcs, so the closure is the same everywhere
    closure = skeleton_closure(sample, [(x, y, d) for x, y, d in arcs])
    prefix, suffix = ends
    none = (ceiling, graph.n, graph.n)
    detours: dict[tuple[int, int], int] = {}
    values: list[list[tuple[int, int, int]]] = [
        [none] * path.h_st for _ in range(graph.n)
    ]
    for b, v_b in enumerate(path.vertices):
        best = values[v_b]
        for a in range(b):
            v_a = path.vertices[a]
            detour = min(
                distances[v_b].get(v_a, ceiling),
                closure.get(v_a, {}).get(v_b, ceiling),
            )
            if detour >= ceiling:
                continue
            detours[a, b] = detour
            candidate = (prefix[a] + detour + suffix[b], a, b)
            for j in range(a, b):
                best[j] = min(best[j], candidate)
    minima = broadcast_aggregate(
        session, tree, values, "min", label="detour-minima"
    )
    table = DetourTable(
        hops=params[0],
        budget=params[1],
        sample=sample,
        distances=tuple(distances),
        detours=detours,
        scale=scale,
    )
    LOGGER.debug(
        "Found %d detours with %d sampled vertices", len(detours), len(sample)
    )
    return table, [(value[0], value[1], value[2]) for value in minima]


def rpaths_dirunw_sampling(
    graph: Graph,
    path: PathSpec,
    *,
    config: SimConfig | None = None,
    session: Session | None = None,
    prob: float | None = None,
) -> RPathsResult:
    """Combine short detours with detours through a sampled skeleton.

    Detours with at most h edges are found by BFS from the path vertices,
    longer ones pass a sampled vertex every h edges with high probability.
    The result can be wrong if the sample misses a long detour.
    """
    graph.require("rp-dirunw-sample", directed=True, weighted=False)
    session = Session.attach(
        graph, config, session, name="rp-dirunw-sample"
    )
    hops, budget = sampling_parameters(graph.n, path.h_st)
    tree = bfs_tree(session, path.s, label="bfs-sample")
    sample = sample_vertices(
        session,
        tree,
        sampling_probability(graph.n, hops) if prob is None else prob,
    )
    table = hop_limited_bfs(
        session,
        frozenset(path.vertices) | sample,
        hops,
        forbidden=path.edges,
        label="bfs-without-path",
    )
    detours, minima = _sampled_rpaths(
        session,
        tree,
        path,
        (hops, budget),
        sample,
        [table.distances(v) for v in range(graph.n)],
        (range(path.h_st + 1), [path.h_st - b for b in range(path.h_st + 1)]),
        1,
        graph.inf,
    )
    weights, witnesses = _collect(path, minima, graph.inf, 1, graph.inf)
    return RPathsResult(
        algorithm="rp-dirunw-sample",
        path=path,
        weights=weights,
        witnesses=witnesses,
        inf=graph.inf,
        report=session.report(),
        trees={"detours": detours},
    )


def rpaths_dirw_approx(  # pylint: disable=too-many-locals
    graph: Graph,
    path: PathSpec,
    eps: Fraction,
    *,
    config: SimConfig | None = None,
    session: Session | None = None,
    prob: float | None = None,
) -> RPathsResult:
    """Use approximate hop limited distances in the sampled skeleton.

    Every weight is at least the replacement path weight and at most
    (1+eps) times it. Missing replacement paths get the inf of the result,
    which is ⌈(1+eps)·inf⌉ of the graph.
    """
    graph.require("rp-dirw-approx", directed=True)
    eps = Fraction(eps)
    session = Session.attach(
        graph, config, session, name="rp-dirw-approx"
    )
    hops, budget = sampling_parameters(graph.n, path.h_st)
    from_s = sssp(session, path.s, label="sssp-from-s")
    to_t = sssp(session, path.t, reverse=True, label="sssp-to-t")
    tree = bfs_tree(session, path.s, label="bfs-sample")
    sample = sample_vertices(
        session,
        tree,
        sampling_probability(graph.n, hops) if prob is None else prob,
    )
    estimates = approx_msssp(
        session,
        frozenset(path.vertices) | sample,
        hops,
        eps,
        forbidden=path.edges,
    )
    # every estimate is a multiple of 1/scale
    scale = 2 * hops * eps.denominator
    distances = [
        {x: int(estimate * scale) for x, estimate in row.items()}
        for row in estimates
    ]
    inf = math.ceil((1 + eps) * graph.inf)
    ceiling = inf * scale
    detours, minima = _sampled_rpaths(
        session,
        tree,
        path,
        (hops, budget),
        sample,
        distances,
        (
            [from_s.dist[v] * scale for v in path.vertices],
            [to_t.dist[v] * scale for v in path.vertices],
        ),
        scale,
        ceiling,
    )
    weights, witnesses = _collect(path, minima, ceiling, scale, inf)
    return RPathsResult(
        algorithm="rp-dirw-approx",
        path=path,
        weights=weights,
        witnesses=witnesses,
        inf=inf,
        report=session.report(),
        trees={"detours": detours, "from_s": from_s, "to_t": to_t},
    )


def _collect(
    path: PathSpec,
    minima: Sequence[tuple[int, int, int]],
    ceiling: int,
    scale: int,
    inf: int,
) -> tuple[tuple[Weight, ...], tuple[Witness | None, ...]]:
    weights: list[Weight] = []
    witnesses: list[Witness | None] = []
    for value, a, b in minima:
        if value >= ceiling:
            weights.append(inf)
            witnesses.append(None)
            continue
        weight = Fraction(value, scale)
        weights.append(weight.numerator if weight.denominator == 1 else weight)
        witnesses.append(
            Witness("detour", path.vertices[a], path.vertices[b])
        )
    return tuple(weights), tuple(witnesses)
