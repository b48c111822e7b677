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

"""Sequential oracles and validators for the distributed outputs.

The oracles recompute every value by brute force; the validators check
constructed paths and cycles against the graph.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Iterator, Mapping, Sequence
from fractions import Fraction
from typing import Final

from ..errors import MissingWitnessError, UsageError, VerificationFailed
from ..graph.graph import Graph, PathSpec
from ..graph.oracle import dijkstra
from ..mwc.result import CycleResult, CycleWitness
from ..reconstruct.trace import RouteTrace, walk_weight
from ..rpaths.result import RPathsResult, Weight

LOGGER: Final = logging.getLogger(__name__)

ENUMERATION_LIMIT: Final[int] = 10


def oracle_rpaths(graph: Graph, path: PathSpec) -> list[int]:
    """Compute the replacement path weights by removing one edge at a time."""
    weights = []
    for u, v in path.edges:
        without = graph.without_arcs([(u, v)])
        dist = dijkstra(without, path.s).dist[path.t]
        weights.append(dist if dist < without.inf else graph.inf)
    return weights


def oracle_sisp2(graph: Graph, path: PathSpec) -> int:
    """The weight of the second simple shortest path, or inf."""
    return min(oracle_rpaths(graph, path), default=graph.inf)


def oracle_ansc(graph: Graph) -> list[int]:
    """Compute the shortest cycle through every node.

    A directed cycle through x closes a path from x to y with the arc
    (y, x). An undirected one joins an edge (x, y) with a path from y to x
    in the graph without that edge.
    """
    result = []
    for x in range(graph.n):
        best = graph.inf
        if graph.directed:
            dist = dijkstra(graph, x).dist
            for y, weight in graph.in_adj[x].items():
                if dist[y] < graph.inf:
                    best = min(best, dist[y] + weight)
        else:
            for y, weight in graph.out_adj[x].items():
                without = graph.without_arcs([(x, y)])
                if (dist := dijkstra(without, y).dist[x]) < without.inf:
                    best = min(best, dist + weight)
        result.append(best)
    return result


def oracle_mwc(graph: Graph) -> int:
    """The minimum weight of a cycle, or inf."""
    return min(oracle_ansc(graph), default=graph.inf)


def oracle_girth(graph: Graph) -> int:
    """The number of edges on a shortest cycle of an undirected graph.

    A BFS from every root closes a cycle of length at most
    dist(x) + dist(y) + 1 at every non-tree edge (x, y), and the minimum
    over all roots is exact.
    """
    graph.require("girth", directed=False)
    best = graph.inf
    for root in range(graph.n):
        dist = [-1] * graph.n
        parent: list[int | None] = [None] * graph.n
        dist[root] = 0
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in graph.out_adj[x]:
                if dist[y] < 0:
                    dist[y], parent[y] = dist[x] + 1, x
                    queue.append(y)
                elif parent[x] != y:
                    best = min(best, dist[x] + dist[y] + 1)
    return best


def enumerate_simple_cycles(graph: Graph) -> Iterator[tuple[int, ...]]:
    """Yield every simple cycle once, starting at its smallest vertex.

    Undirected cycles have at least three vertices and are yielded in one
    direction only.
    """
    if graph.n > ENUMERATION_LIMIT:
        raise UsageError(
            f"Enumerating cycles needs n <= {ENUMERATION_LIMIT}, "
            f"got {graph.n!r}"
        )
    for start in range(graph.n):
        stack: list[tuple[int, list[int]]] = [(start, [start])]
        while stack:
            node, walk = stack.pop()
            for nxt in sorted(graph.out_adj[node]):
                if nxt == start:
                    if graph.directed or (len(walk) > 2 and walk[1] < walk[-1]):
                        yield tuple(walk)
                elif nxt > start and nxt not in walk:
                    stack.append((nxt, [*walk, nxt]))


def brute_force_mwc(graph: Graph) -> int:
    """The minimum weight over all enumerated simple cycles."""
    return min(
        (
            walk_weight(graph, [*cycle, cycle[0]])
            for cycle in enumerate_simple_cycles(graph)
        ),
        default=graph.inf,
    )


def check_rpaths(
    graph: Graph, result: RPathsResult, ratio: Fraction | None = None
) -> None:
    """Compare the result with the oracle, up to the ratio if given."""
    expected = oracle_rpaths(graph, result.path)
    for j, (got, want) in enumerate(zip(result.weights, expected)):
        if want >= graph.inf:
            ok = got >= result.inf
        elif ratio is None:
            ok = got == want
        else:
            ok = want <= got <= ratio * want
        if not ok:
            raise VerificationFailed(
                f"{result.algorithm}: edge {result.path.edges[j]!r} "
                f"has weight {got!r}, expected {want!r}"
            )


def check_cycles(
    graph: Graph, result: CycleResult, ratio: Fraction | None = None
) -> None:
    """Compare the minimum and the per-node values with the oracle.

    Approximate minima may exceed the optimum by the ratio, which defaults
    to the one the result claims.
    """
    ratio = ratio or result.ratio
    expected = oracle_ansc(graph)
    want = min(expected, default=graph.inf)
    if result.ansc is not None:
        for x, (got, value) in enumerate(zip(result.ansc, expected)):
            if min(got, graph.inf) != value:
                raise VerificationFailed(
                    f"{result.algorithm}: cycle through {x!r} has weight "
                    f"{got!r}, expected {value!r}"
                )
    if want >= graph.inf:
        ok = result.acyclic
    elif ratio is None:
        ok = result.weight == want
    else:
        ok = want <= result.weight <= ratio * want
    if not ok:
        raise VerificationFailed(
            f"{result.algorithm}: minimum cycle weight {result.weight!r}, "
            f"expected {want!r}"
        )


def _is_simple_path(vertices: Sequence[int]) -> bool:
    return len(set(vertices)) == len(vertices)


def validate_route(
    graph: Graph,
    path: PathSpec,
    trace: RouteTrace,
    expected: Weight,
    *,
    approximate: bool = False,
) -> None:
    """Check that the routed walk is a replacement path of the given weight.

    An approximate weight is an upper bound of the weight of the route.
    """
    if not trace.found:
        if expected < graph.inf:
            raise VerificationFailed(f"No route after {trace.failed!r}")
        return
    vertices = trace.vertices
    problems = []
    if vertices[0] != path.s or vertices[-1] != path.t:
        problems.append("does not lead from s to t")
    if not _is_simple_path(vertices):
        problems.append("is not simple")
    failed = trace.failed
    for u, v in zip(vertices, vertices[1:]):
        if not graph.has_arc(u, v):
            problems.append(f"uses the missing arc {(u, v)!r}")
        elif failed is not None and (
            (u, v) == failed or (not graph.directed and (v, u) == failed)
        ):
            problems.append("uses the failed edge")
    if not problems:
        weight = walk_weight(graph, vertices)
        if weight > expected or (not approximate and weight != expected):
            problems.append(f"has weight {weight!r}, expected {expected!r}")
    if problems:
        raise VerificationFailed(
            f"The route {vertices!r} " + " and ".join(problems)
        )


def validate_cycle(
    graph: Graph,
    vertices: Sequence[int],
    expected: Weight | None = None,
    *,
    through: int | None = None,
) -> int:
    """Check that the closed walk is a simple cycle and return its weight."""
    problems = []
    if len(vertices) < 3 or vertices[0] != vertices[-1]:
        problems.append("is not closed")
    elif not _is_simple_path(vertices[:-1]):
        problems.append("is not simple")
    elif not graph.directed and len(vertices) < 4:
        problems.append("uses an edge twice")
    if through is not None and through not in vertices:
        problems.append(f"misses {through!r}")
    for u, v in zip(vertices, vertices[1:]):
        if not graph.has_arc(u, v):
            problems.append(f"uses the missing arc {(u, v)!r}")
    if problems:
        raise VerificationFailed(
            f"The cycle {tuple(vertices)!r} " + " and ".join(problems)
        )
    weight = walk_weight(graph, vertices)
    if expected is not None and weight != expected:
        raise VerificationFailed(
            f"The cycle {tuple(vertices)!r} has weight {weight!r}, "
            f"expected {expected!r}"
        )
    return weight


def _tree_path(
    parent: Sequence[int | None] | Mapping[int, int | None], x: int
) -> list[int]:
    """The vertices from x up to the root of the parent pointers."""
    walk = [x]
    while (up := parent[walk[-1]]) is not None:
        walk.append(up)
        if len(walk) > len(parent):
            raise MissingWitnessError("The parent pointers contain a cycle")
    return walk


def simple_cycle_in(graph: Graph, walk: Sequence[int]) -> list[int]:
    """Reduce a closed walk to a simple cycle on it.

    Steps that go back and forth over one undirected edge cancel, and the
    first repeated vertex closes the cycle.
    """
    stack: list[int] = []
    for x in walk[:-1]:
        if not graph.directed and len(stack) > 1 and stack[-2] == x:
            stack.pop()
            continue
        stack.append(x)
    while not graph.directed and len(stack) > 2 and stack[1] == stack[-1]:
        stack = stack[1:-1]
    seen: dict[int, int] = {}
    for i, x in enumerate(stack):
        if x in seen:
            return [*stack[seen[x] : i], x]
        seen[x] = i
    return [*stack, stack[0]] if stack else []


def expand_cycle_witness(
    graph: Graph, result: CycleResult, witness: CycleWitness | None = None
) -> list[int]:
    """Expand a witness into the closed walk it describes.

    The exact algorithms expand over their shortest path table, the
    approximate ones over the tree of the source of the witness.
    """
    witness = witness or result.witness
    if witness is None:
        raise MissingWitnessError(f"{result.algorithm!r} found no cycle")
    if witness.kind == "arc":
        table = result.tables["apsp"]
        walk = [witness.through]
        while walk[-1] != witness.first:
            entry = table.entry(witness.first, walk[-1])
            if entry is None or entry.last is None or len(walk) > graph.n:
                raise MissingWitnessError(f"Broken path in {witness!r}")
            walk.append(entry.last)
        return [*walk, witness.through]
    if witness.kind == "triple":
        table = result.tables["apsp"]
        assert witness.second is not None  # nosec: B101
        root = witness.through
        parent = {
            x: None if x == root else entry.last
            for x in range(graph.n)
            if (entry := table.entry(root, x)) or x == root
        }
        to_first = _tree_path(parent, witness.first)
        to_second = _tree_path(parent, witness.second)
        return [*to_first[::-1], *to_second]
    tree = result.tables.get("tree")
    if not tree:
        raise MissingWitnessError(f"{result.algorithm!r} keeps no tree")
    assert witness.second is not None  # nosec: B101
    to_first = _tree_path(tree, witness.first)
    to_second = _tree_path(tree, witness.second)
    middle = [] if witness.middle is None else [witness.middle]
    return [*to_first[::-1], *middle, *to_second]


def check_cycle_witness(graph: Graph, result: CycleResult) -> int:
    """Check that the witness holds a cycle of at most the reported weight."""
    if result.acyclic:
        return result.inf
    cycle = simple_cycle_in(graph, expand_cycle_witness(graph, result))
    weight = validate_cycle(graph, cycle)
    if weight > result.weight:
        raise VerificationFailed(
            f"The witness of {result.algorithm} weighs {weight!r}, "
            f"more than the reported {result.weight!r}"
        )
    return weight


def ratio_of(got: Weight, want: int) -> Fraction:
    """The approximation ratio achieved, 1 for exact values."""
    if want <= 0:
        return Fraction(1)
    return Fraction(got) / want
