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

"""Construction of replacement paths after the failure of a path edge.

A failure is noticed at the tail v_j of the failed edge, which notifies s
along the input path. Then s sends the message, which every node forwards
according to its routing table, or according to the pointers that the
on-the-fly construction sets up.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from typing import Final

from ..congest.simulator import (
    Inbox,
    Node,
    Session,
    SimConfig,
    decode_optional,
    encode_optional,
)
from ..errors import MissingWitnessError, TableCorruptionError, UsageError
from ..graph.graph import Graph, PathSpec
from ..primitives.aggregate import broadcast_aggregate
from ..primitives.apsp import Overlay, apsp
from ..primitives.bfs import BfsTree, bfs_tree
from ..rpaths.result import RPathsResult
from ..rpaths.undirected import EDGE, VERTEX
from .trace import (
    OnFlyState,
    RouteEntry,
    RouteTrace,
    RoutingTable,
    follow_pointers,
    walk_weight,
)

LOGGER: Final = logging.getLogger(__name__)

NOTIFY: Final[int] = 0
ROUTE: Final[int] = 1
DOWN: Final[int] = 2
UP: Final[int] = 3

DETOUR_ALGORITHMS: Final[frozenset[str]] = frozenset(
    {"rp-dirw-apsp", "rp-dirunw-sample", "rp-dirw-approx"}
)


class MarkNode(Node):
    """Send marks back along pointers; a marked node points at the sender."""

    __slots__ = ("marked",)

    def init(self) -> None:  # noqa: D102
        self.marked: dict[int, int] = {}
        self.output["marked"] = self.marked
        for key in self.view.inputs["starts"]:
            self._forward(key)
        self.vote_to_halt()

    def _forward(self, key: int) -> None:
        back = self.view.inputs["back"]
        if (target := back.get(key, self.view.inputs["default"])) is not None:
            self.post(target, key, priority=(key,))

    def compute(self, inbox: Inbox, round_: int) -> None:  # noqa: D102
        for sender, (key,) in inbox:
            self.marked[key] = sender
            self._forward(key)
        self.vote_to_halt()


def mark(
    session: Session,
    starts: Sequence[Iterable[int]],
    default: Sequence[int | None],
    back: Sequence[Mapping[int, int | None]] | None = None,
    *,
    label: str = "mark",
) -> list[dict[int, int]]:
    """Reverse the pointers on the way from every start to the end.

    The mark with a key starts at every node listing the key and follows
    back[x][key] (default[x] if missing) until a node has no pointer.
    Marks of different keys share the links, smaller keys first.
    """
    outputs = session.run(
        MarkNode,
        label=label,
        inputs=[
            {
                "back": back[x] if back else {},
                "default": default[x],
                "starts": tuple(sorted(starts[x])),
            }
            for x in range(session.graph.n)
        ],
    )
    return [output["marked"] for output in outputs]


def edge_index(path: PathSpec, failed: tuple[int, int], directed: bool) -> int:
    """Find the position of the failed edge on the path."""
    for j, edge in enumerate(path.edges):
        if edge == failed or (not directed and edge == failed[::-1]):
            return j
    raise UsageError(f"{failed!r} is not an edge of the path {path.vertices!r}")


def _broadcast_witnesses(
    session: Session, path: PathSpec, items: Sequence[tuple[int, ...]]
) -> tuple[BfsTree, list[tuple[int, ...]]]:
    """Let every node know the witnesses that s holds."""
    tree = bfs_tree(session, path.s, label="bfs-witnesses")
    received = broadcast_aggregate(
        session,
        tree,
        [list(items) if x == path.s else [] for x in range(session.graph.n)],
        "concat",
        label="witness-broadcast",
    )
    return tree, [tuple(item) for item in received]


def _entry(successor: Mapping[int, int], x: int, hop: int) -> RouteEntry:
    return RouteEntry(successor.get(x) == hop, hop)


def _undirected_entries(
    session: Session, result: RPathsResult
) -> list[dict[int, RouteEntry]]:
    """Point along P_s(s,u), then over the witness, then towards t."""
    path = result.path
    from_s, to_t = result.trees["from_s"], result.trees["to_t"]
    _, received = _broadcast_witnesses(
        session,
        path,
        [
            (
                j,
                VERTEX if witness.kind == "vertex" else EDGE,
                witness.first,
                encode_optional(witness.second),
            )
            for j, witness in enumerate(result.witnesses)
            if witness is not None
        ],
    )
    deviation = {j: (kind, u, decode_optional(v)) for j, kind, u, v in received}
    n = session.graph.n
    marked = mark(
        session,
        [[j for j, (_, u, _) in deviation.items() if u == x] for x in range(n)],
        from_s.parent,
        label="mark-prefix",
    )
    successor = dict(zip(path.vertices, path.vertices[1:]))
    entries: list[dict[int, RouteEntry]] = []
    for x in range(n):
        row: dict[int, RouteEntry] = {}
        for j, (kind, u, v) in deviation.items():
            if j in marked[x]:
                hop = marked[x][j]
            elif x == u and kind == EDGE:
                hop = v
            else:
                hop = to_t.parent[x]
            if hop is not None:
                row[j] = _entry(successor, x, hop)
        entries.append(row)
    return entries


def _detour_entries(
    session: Session, result: RPathsResult
) -> list[dict[int, RouteEntry]]:
    """Follow the path up to v_a, then go towards v_b avoiding the path."""
    path = result.path
    position = {v: c for c, v in enumerate(path.vertices)}
    _, received = _broadcast_witnesses(
        session,
        path,
        [
            (j, position[witness.first], position[witness.second])
            for j, witness in enumerate(result.witnesses)
            if witness is not None and witness.second is not None
        ],
    )
    detours = {j: (a, b) for j, a, b in received}
    targets = sorted({path.vertices[b] for _, b in detours.values()})
    toward = apsp(
        session,
        Overlay(
            host={},
            arcs=(),
            removed=frozenset((v, u) for u, v in path.edges),
        ),
        targets,
        reverse=True,
        label="apsp-to-merge",
    )
    successor = dict(zip(path.vertices, path.vertices[1:]))
    entries: list[dict[int, RouteEntry]] = []
    for x in range(session.graph.n):
        row: dict[int, RouteEntry] = {}
        c = position.get(x)
        for j, (a, b) in detours.items():
            if c is not None and not a <= c < b:
                if x in successor:
                    row[j] = RouteEntry(True, successor[x])
                continue
            entry = toward.entry(path.vertices[b], x)
            if entry is not None and entry.last is not None:
                row[j] = _entry(successor, x, entry.last)
        entries.append(row)
    return entries


def _iterated_entries(result: RPathsResult) -> list[dict[int, RouteEntry]]:
    """Use the shortest path tree of the phase without the failed edge."""
    path = result.path
    successor = dict(zip(path.vertices, path.vertices[1:]))
    trees = result.trees["without_edge"]
    entries: list[dict[int, RouteEntry]] = [{} for _ in trees[0].parent]
    for j, tree in enumerate(trees):
        if not result.finite(j):
            continue
        for x, parent in enumerate(tree.parent):
            if parent is not None:
                entries[x][j] = _entry(successor, x, parent)
    return entries


def build_rpath_tables(
    graph: Graph,
    result: RPathsResult,
    *,
    config: SimConfig | None = None,
    session: Session | None = None,
) -> RoutingTable:
    """Build the routing table of every node for every failed path edge.

    The witnesses are broadcast from s. Undirected results then mark the
    tree paths from s to the deviation vertices, directed ones compute the
    next hop towards every merge vertex in the graph without the path.
    """
    session = Session.attach(graph, config, session, name="routing-tables")
    if result.algorithm == "rp-iter-sssp":
        entries = _iterated_entries(result)
    elif result.algorithm == "rp-undir":
        entries = _undirected_entries(session, result)
    elif result.algorithm in DETOUR_ALGORITHMS:
        entries = _detour_entries(session, result)
    else:
        raise MissingWitnessError(
            f"{result.algorithm!r} keeps no witnesses for routing"
        )
    path = result.path
    hops = [0]
    for j in range(path.h_st):
        if result.finite(j):
            next_hop = {
                x: row[j].next_hop for x, row in enumerate(entries) if j in row
            }
            route = follow_pointers(next_hop, path.s, path.t, graph.n)
            hops.append(len(route) - 1)
    return RoutingTable(
        algorithm=result.algorithm,
        path=path,
        weights=result.weights,
        entries=tuple(entries),
        h_rep=max(hops),
        inf=result.inf,
        report=session.report(),
    )


def _no_replacement(failed: tuple[int, int], inf: int) -> RouteTrace:
    LOGGER.info("No replacement path exists for %r", failed)
    return RouteTrace(vertices=(), rounds=0, weight=inf, failed=failed)


def _arrivals(outputs: Sequence[Mapping[str, object]]) -> tuple[int, ...]:
    return tuple(
        x
        for _, x in sorted(
            (output["arrived"], x)
            for x, output in enumerate(outputs)
            if "arrived" in output
        )
    )


class RouteNode(Node):
    """Notify s along the path, then forward the message along the table."""

    __slots__ = ()

    def init(self) -> None:  # noqa: D102
        vertices = self.view.params["vertices"]
        if self.view.node == vertices[self.view.params["failed"]]:
            self._notified(0)
        self.vote_to_halt()

    def _notified(self, round_: int) -> None:
        vertices = self.view.params["vertices"]
        if index := vertices.index(self.view.node):
            self.post(vertices[index - 1], NOTIFY)
            return
        self.output["notified"] = round_
        self._route(round_)

    def _route(self, round_: int) -> None:
        node = self.view.node
        if "arrived" in self.output:
            raise TableCorruptionError(f"The message reached {node!r} twice")
        self.output["arrived"] = round_
        if node == self.view.params["vertices"][-1]:
            return
        if (hop := self.view.inputs["next"]) is None:
            raise TableCorruptionError(
                f"Node {node!r} has no entry for the failed edge"
            )
        self.post(hop, ROUTE)

    def compute(self, inbox: Inbox, round_: int) -> None:  # noqa: D102
        for _, (kind,) in inbox:
            if kind == NOTIFY:
                self._notified(round_)
            else:
                self._route(round_)
        self.vote_to_halt()


def route_failover(
    graph: Graph,
    tables: RoutingTable,
    failed: tuple[int, int],
    *,
    config: SimConfig | None = None,
) -> RouteTrace:
    """Route a message from s to t after the failure of a path edge."""
    path = tables.path
    index = edge_index(path, failed, graph.directed)
    if tables.weights[index] >= tables.inf:
        return _no_replacement(failed, tables.inf)
    session = Session(graph, config, name="route-failover")
    outputs = session.run(
        RouteNode,
        label=f"route-{index}",
        params={"failed": index, "vertices": path.vertices},
        inputs=[{"next": tables.next_hop(x, index)} for x in range(graph.n)],
    )
    vertices = _arrivals(outputs)
    return RouteTrace(
        vertices=vertices,
        rounds=session.rounds,
        weight=walk_weight(graph, vertices),
        failed=failed,
        notification_rounds=outputs[path.s]["notified"],
    )


class OnFlyNode(Node):
    """Find the deviation vertex, reverse the tree path to it and route.

    Besides its tree pointers a node stores at most the reversed pointer
    and, at the deviation vertex, the end of the witness.
    """

    __slots__ = ("hold", "reverse")

    def init(self) -> None:  # noqa: D102
        self.hold: tuple[int, int | None] | None = None
        self.reverse: int | None = None
        self.output["stored"] = 0
        vertices = self.view.params["vertices"]
        if self.view.node == vertices[self.view.params["failed"]]:
            self._notified(0)
        self.vote_to_halt()

    def _store(self) -> None:
        self.output["stored"] = (self.hold is not None) + (
            self.reverse is not None
        )

    def _notified(self, round_: int) -> None:
        vertices = self.view.params["vertices"]
        if index := vertices.index(self.view.node):
            self.post(vertices[index - 1], NOTIFY)
            return
        self.output["notified"] = round_
        kind, u, v, depth = self.view.inputs["witnesses"][
            self.view.params["failed"]
        ]
        self._down(round_, kind, u, v, depth)

    def _down(
        self, round_: int, kind: int, u: int, v: int, remaining: int
    ) -> None:
        if self.view.node != u:
            if remaining:
                for child in self.view.inputs["children"]:
                    self.post(child, DOWN, kind, u, v, remaining - 1)
            return
        self.hold = (kind, decode_optional(v))
        self._store()
        if (parent := self.view.inputs["parent_s"]) is None:
            self._route(round_)
        else:
            self.post(parent, UP)

    def _up(self, round_: int, sender: int) -> None:
        self.reverse = sender
        self._store()
        if (parent := self.view.inputs["parent_s"]) is None:
            self._route(round_)
        else:
            self.post(parent, UP)

    def _route(self, round_: int) -> None:
        node = self.view.node
        if "arrived" in self.output:
            raise TableCorruptionError(f"The message reached {node!r} twice")
        self.output["arrived"] = round_
        if node == self.view.params["vertices"][-1]:
            return
        hop: int | None
        if self.hold is not None:
            kind, v = self.hold
            hop = v if kind == EDGE else self.view.inputs["parent_t"]
        elif self.reverse is not None:
            hop = self.reverse
        else:
            hop = self.view.inputs["parent_t"]
        if hop is None:
            raise TableCorruptionError(f"Node {node!r} cannot forward")
        self.post(hop, ROUTE)

    def compute(self, inbox: Inbox, round_: int) -> None:  # noqa: D102
        for sender, (kind, *fields) in inbox:
            if kind == NOTIFY:
                self._notified(round_)
            elif kind == DOWN:
                self._down(round_, *fields)
            elif kind == UP:
                self._up(round_, sender)
            else:
                self._route(round_)
        self.vote_to_halt()


def onfly_construct_undirected(
    graph: Graph,
    state: OnFlyState,
    failed: tuple[int, int],
    *,
    config: SimConfig | None = None,
) -> RouteTrace:
    """Construct the replacement path without routing tables.

    s sends the witness down its shortest path tree to the deviation vertex
    u, which reverses the parent pointers on its way back to s. Then the
    message follows the reversed pointers to u and the tree of t from there.
    """
    graph.require("onfly-construct", directed=False)
    path = state.path
    index = edge_index(path, failed, directed=False)
    if state.weights[index] >= state.inf:
        return _no_replacement(failed, state.inf)
    witnesses = tuple(
        None
        if witness is None
        else (
            VERTEX if witness.kind == "vertex" else EDGE,
            witness.first,
            encode_optional(witness.second),
            depth,
        )
        for witness, depth in zip(state.witnesses, state.depth, strict=True)
    )
    session = Session(graph, config, name="onfly-construct")
    outputs = session.run(
        OnFlyNode,
        label=f"onfly-{index}",
        params={"failed": index, "vertices": path.vertices},
        inputs=[
            {
                "children": state.children_s[x],
                "parent_s": state.parent_s[x],
                "parent_t": state.parent_t[x],
                "witnesses": witnesses if x == path.s else (),
            }
            for x in range(graph.n)
        ],
    )
    vertices = _arrivals(outputs)
    return RouteTrace(
        vertices=vertices,
        rounds=session.rounds,
        weight=walk_weight(graph, vertices),
        failed=failed,
        notification_rounds=outputs[path.s]["notified"],
        stored=max(
            (
                output["stored"]
                for x, output in enumerate(outputs)
                if x != path.s
            ),
            default=0,
        ),
    )
