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

"""Approximate minimum weight cycles in undirected graphs.

Both algorithms look for non-tree edges (x, y) of partial shortest path
trees: the tree paths from the source w to x and y together with the edge
form a closed walk of weight d(w, x) + d(w, y) + w(x, y) that contains a
simple cycle. Near cycles are found in the neighbourhoods computed by
source detection, far cycles from the trees of sampled vertices.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping, Sequence
from fractions import Fraction
from typing import Final

from ..congest.simulator import (
    Session,
    SimConfig,
    decode_optional,
    encode_optional,
)
from ..graph.graph import Graph, scale_weights
from ..primitives.aggregate import (
    broadcast_aggregate,
    sample_vertices,
    sampling_probability,
)
from ..primitives.bfs import bfs_tree
from ..primitives.detection import DetectionTable, detect, source_detection
from ..primitives.exchange import exchange
from ..primitives.sssp import approx_levels, sssp
from ..utils.utils import ceil_root
from .result import CycleResult, CycleWitness, Weight

LOGGER: Final = logging.getLogger(__name__)

NON_TREE: Final[int] = 0
TWO_EDGE: Final[int] = 1

type Known = Mapping[int, tuple[int, int | None]]
type Candidate = tuple[int, int, int, int, int, int]


def known_sources(
    table: DetectionTable,
) -> list[dict[int, tuple[int, int | None]]]:
    """Map the detected sources of every node to (distance, parent)."""
    return [
        {entry.source: (entry.dist, entry.parent) for entry in row}
        for row in table.rows
    ]


def non_tree_candidates(  # pylint: disable=too-many-locals
    session: Session,
    known: Sequence[Known],
    weights: Graph,
    *,
    refine: bool = False,
    label: str = "exchange-trees",
) -> list[list[Candidate]]:
    """Exchange the tree entries with neighbours and list candidate cycles.

    A candidate is (length, kind, source, x, y, middle). With refine a node
    z that does not know the source also closes the walk over two of its
    edges, which finds even cycles with one vertex outside the tree.
    """
    received = exchange(
        session,
        [
            [
                (source, dist, encode_optional(parent))
                for source, (dist, parent) in sorted(row.items())
            ]
            for row in known
        ],
        label=label,
    )
    result: list[list[Candidate]] = []
    for x, mine in enumerate(known):
        theirs = {
            y: {
                src: (dist, decode_optional(parent))
                for src, dist, parent in items
            }
            for y, items in received[x].items()
        }
        candidates: list[Candidate] = []
        for y, row in sorted(theirs.items()):
            if y < x:
                continue
            for src in sorted(mine.keys() & row.keys()):
                (d_x, p_x), (d_y, p_y) = mine[src], row[src]
                if p_x == y or p_y == x:
                    continue
                candidates.append(
                    (d_x + d_y + weights.weight(x, y), NON_TREE, src, x, y, x)
                )
        if refine:
            neighbors = sorted(theirs)
            for i, a in enumerate(neighbors):
                for b in neighbors[i + 1 :]:
                    for src in sorted(theirs[a].keys() & theirs[b].keys()):
                        (d_a, p_a), (d_b, p_b) = theirs[a][src], theirs[b][src]
                        if src in mine or x in {p_a, p_b}:
                            continue
                        length = (
                            d_a
                            + d_b
                            + weights.weight(a, x)
                            + weights.weight(x, b)
                        )
                        candidates.append((length, TWO_EDGE, src, a, b, x))
        result.append(candidates)
    return result


def source_tree(known: Sequence[Known], source: int) -> dict[int, int | None]:
    """The parent pointers of the partial tree of the source."""
    return {x: row[source][1] for x, row in enumerate(known) if source in row}


def _witness(kind: int, src: int, x: int, y: int, z: int) -> CycleWitness:
    if kind == NON_TREE:
        return CycleWitness("non-tree", src, x, y)
    return CycleWitness("two-edge", src, x, y, z)


class _Best[T: tuple[int, ...]]:
    """The best candidate of every node and the tree of the overall best."""

    __slots__ = ("tree", "values", "winner")

    def __init__(self, none: T, n: int) -> None:
        self.values = [none] * n
        self.winner = none
        self.tree: dict[int, int | None] = {}

    def offer(self, u: int, value: T, known: Sequence[Known], src: int) -> None:
        """Keep the value at u if it is better than the current one."""
        if value < self.values[u]:
            self.values[u] = value
        if value < self.winner:
            self.winner = value
            self.tree = source_tree(known, src)


def girth_approx(
    graph: Graph,
    *,
    config: SimConfig | None = None,
    session: Session | None = None,
    prob: float | None = None,
) -> CycleResult:
    """Approximate the girth within a factor of 2 - 1/g.

    The neighbourhood of every vertex holds its ⌈√n⌉ closest vertices, and
    vertices are sampled with probability min(1, 2·ln n/√n).
    """
    graph.require("girth-approx", directed=False, weighted=False)
    session = Session.attach(graph, config, session, name="girth-approx")
    n = graph.n
    limit = max(1, min(n, ceil_root(n, 1, 2)))
    inf = 2 * graph.inf
    best = _Best((inf, NON_TREE, n, n, n, n), n)
    near = known_sources(source_detection(session, range(n), limit, n))
    tree = bfs_tree(session, 0, label="bfs-sample")
    sample = sample_vertices(
        session,
        tree,
        sampling_probability(n, limit) if prob is None else prob,
        label="sample",
    )
    far = known_sources(detect(session, sample, label="bfs-sampled"))
    for known, refine, label in (
        (near, True, "exchange-neighbourhoods"),
        (far, False, "exchange-sampled"),
    ):
        rows = non_tree_candidates(
            session, known, graph, refine=refine, label=label
        )
        for u, row in enumerate(rows):
            for candidate in row:
                best.offer(u, candidate, known, candidate[2])
    (minimum,) = broadcast_aggregate(
        session,
        tree,
        [[value] for value in best.values],
        "min",
        label="candidate-minimum",
    )
    length, kind, src, x, y, z = minimum
    found = length < inf
    return CycleResult(
        algorithm="girth-approx",
        weight=length if found else inf,
        witness=_witness(kind, src, x, y, z) if found else None,
        inf=inf,
        h_cyc=length if found else None,
        ratio=Fraction(2),
        report=session.report(),
        tables={"tree": best.tree} if found else {},
    )


def weight_levels(hops: int, max_weight: int, eps: Fraction) -> range:
    """Get the levels 1..⌈log_(1+eps)(h·W)⌉, at least those for h edges."""
    product = hops * max_weight
    top = (
        math.ceil(math.log(product) / math.log(1 + eps)) if product > 1 else 1
    )
    return range(1, max(top, approx_levels(hops, max_weight)[-1]) + 1)


def mwc_undirw_approx(  # pylint: disable=too-many-locals
    graph: Graph,
    eps: Fraction,
    *,
    config: SimConfig | None = None,
    session: Session | None = None,
    prob: float | None = None,
) -> CycleResult:
    """Approximate the minimum weight cycle within a factor of 2 + 2·eps.

    Level i runs the girth approximation with a hop limit on the graph whose
    weights are scaled by 2·h/(eps·2^i) with h = ⌈n^(3/4)⌉. Cycles with
    more than h edges contain a sampled vertex, whose exact shortest path
    tree finds them.
    """
    graph.require("mwc-wapprox", directed=False, weighted=True)
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError(f"eps must be positive: {eps!r}")
    session = Session.attach(graph, config, session, name="mwc-wapprox")
    n = graph.n
    hops = max(1, min(n, ceil_root(n, 3, 4)))
    cap = math.ceil((1 + 2 / eps) * hops)
    limit = max(1, min(n, ceil_root(n, 1, 2)))
    # every candidate is a multiple of 1/scale
    scale = 2 * hops * eps.denominator
    inf = math.ceil((2 + 2 * eps) * graph.inf)
    best = _Best((inf * scale, 0, NON_TREE, n, n, n, n, 0), n)
    tree = bfs_tree(session, 0, label="bfs-sample")
    near_sample = sample_vertices(
        session, tree, sampling_probability(n, limit), label="sample-near"
    )
    for i in weight_levels(hops, graph.max_weight, eps):
        scaled = scale_weights(graph, i, eps, hops)
        for sources, table_limit, label in (
            (range(n), limit, f"detection-{i}"),
            (near_sample, None, f"bfs-sampled-{i}"),
        ):
            known = known_sources(
                detect(
                    session,
                    sources,
                    limit=table_limit,
                    cap=cap,
                    unit=False,
                    delayed=True,
                    graph=scaled,
                    label=label,
                )
            )
            rows = non_tree_candidates(
                session, known, scaled, label=f"exchange-{label}"
            )
            for u, row in enumerate(rows):
                for length, kind, src, x, y, z in row:
                    best.offer(
                        u,
                        (
                            eps.numerator * 2**i * length,
                            i,
                            kind,
                            src,
                            x,
                            y,
                            z,
                            length,
                        ),
                        known,
                        src,
                    )
    far_sample = sample_vertices(
        session,
        tree,
        sampling_probability(n, hops) if prob is None else prob,
        label="sample-far",
    )
    exact: list[dict[int, tuple[int, int | None]]] = [{} for _ in range(n)]
    for w in sorted(far_sample):
        result = sssp(session, w, label=f"sssp-{w}")
        for u in range(n):
            if result.dist[u] < graph.inf:
                exact[u][w] = (result.dist[u], result.parent[u])
    rows = non_tree_candidates(session, exact, graph, label="exchange-sssp")
    for u, row in enumerate(rows):
        for length, kind, src, x, y, z in row:
            best.offer(
                u, (length * scale, 0, kind, src, x, y, z, length), exact, src
            )
    (minimum,) = broadcast_aggregate(
        session,
        tree,
        [[value] for value in best.values],
        "min",
        label="minimum",
    )
    value, level, kind, src, x, y, z, length = minimum
    found = value < inf * scale
    weight: Weight = Fraction(value, scale)
    if weight.denominator == 1:
        weight = weight.numerator
    LOGGER.debug("Best candidate %r found on level %d", minimum, level)
    return CycleResult(
        algorithm="mwc-wapprox",
        weight=weight if found else inf,
        witness=_witness(kind, src, x, y, z) if found else None,
        inf=inf,
        ratio=2 + 2 * eps,
        level=level if found else None,
        scaled_length=length if found else None,
        report=session.report(),
        tables={"tree": best.tree} if found else {},
    )
