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

"""Construction of the shortest cycle through a node.

Both modes need the all pairs shortest paths table and the per-node
witnesses kept by the exact algorithms. The table mode precomputes the next
hop of every node on the cycle through every u; the on-the-fly mode walks
the shortest path pointers and needs no further storage.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from typing import Final, Literal

from ..congest.simulator import (
    Inbox,
    Node,
    Session,
    SimConfig,
    decode_optional,
    encode_optional,
)
from ..errors import MissingWitnessError, TableCorruptionError, UsageError
from ..graph.graph import Graph
from ..mwc.result import CycleResult, CycleWitness
from ..primitives.aggregate import broadcast_aggregate
from ..primitives.apsp import ApspTable
from ..primitives.bfs import bfs_tree
from .routing import mark
from .trace import CycleTable, RouteTrace, walk_weight

LOGGER: Final = logging.getLogger(__name__)

type Mode = Literal["table", "onfly"]

EXACT_ALGORITHMS: Final[frozenset[str]] = frozenset(
    {"mwc-dir", "mwc-undir", "ansc"}
)


def _table_of(result: CycleResult) -> ApspTable:
    if (
        result.algorithm not in EXACT_ALGORITHMS
        or "apsp" not in result.tables
        or result.witnesses is None
    ):
        raise MissingWitnessError(
            f"{result.algorithm!r} keeps no table to construct cycles from"
        )
    table: ApspTable = result.tables["apsp"]
    return table


def _hop(table: ApspTable, target: int, node: int) -> int | None:
    """The next hop of the node on the shortest path towards the target."""
    entry = table.entry(target, node)
    return None if entry is None else entry.last


def build_cycle_tables(
    graph: Graph,
    result: CycleResult,
    *,
    config: SimConfig | None = None,
    session: Session | None = None,
) -> CycleTable:
    """Let every node know its successor on the cycle through every u.

    The witnesses are broadcast first. In directed graphs the successor is
    the next hop towards the tail of the closing arc. In undirected graphs
    the path from u to v is marked backwards from v.
    """
    table = _table_of(result)
    assert result.witnesses is not None  # nosec: B101
    session = Session.attach(graph, config, session, name="cycle-tables")
    tree = bfs_tree(session, 0, label="bfs-witnesses")
    received = broadcast_aggregate(
        session,
        tree,
        [
            [
                (u, witness.first, encode_optional(witness.second))
                for u, witness in enumerate(result.witnesses)
                if witness is not None
            ]
            if x == tree.root
            else []
            for x in range(graph.n)
        ],
        "concat",
        label="witness-broadcast",
    )
    witnesses = {
        u: (first, decode_optional(second)) for u, first, second in received
    }
    entries: list[dict[int, int]] = [{} for _ in range(graph.n)]
    if graph.directed:
        for x in range(graph.n):
            for u, (y, _) in witnesses.items():
                hop = u if x == y else _hop(table, y, x)
                if hop is not None:
                    entries[x][u] = hop
    else:
        marked = mark(
            session,
            [
                [u for u, (v, _) in witnesses.items() if v == x]
                for x in range(graph.n)
            ],
            [None] * graph.n,
            [
                {u: _hop(table, u, x) for u in witnesses}
                for x in range(graph.n)
            ],
            label="mark-cycles",
        )
        for x in range(graph.n):
            for u, (v, other) in witnesses.items():
                if u in marked[x]:
                    hop = marked[x][u]
                elif x == v:
                    hop = other
                else:
                    hop = _hop(table, u, x)
                if hop is not None:
                    entries[x][u] = hop
    return CycleTable(
        algorithm=result.algorithm,
        weights=result.ansc or (),
        entries=tuple(entries),
        inf=result.inf,
        report=session.report(),
    )


class TracerNode(Node):
    """Forward tracers (leg, key) until they are back at the cycle node.

    A node forwards to its next hop for the key; with switch set, the node
    named by the key forwards to the cycle node instead.
    """

    __slots__ = ()

    def init(self) -> None:  # noqa: D102
        self.output["arrived"] = {}
        for leg, key in self.view.inputs.get("start", ()):
            self._arrive(0, leg, key)
        self.vote_to_halt()

    def _arrive(self, round_: int, leg: int, key: int) -> None:
        node = self.view.node
        through = self.view.params["through"]
        if node == through and round_:
            return
        arrived = self.output["arrived"]
        if leg in arrived:
            raise TableCorruptionError(f"Leg {leg!r} visits {node!r} twice")
        arrived[leg] = round_
        if self.view.params["switch"] and node == key:
            hop = through
        else:
            hop = self.view.inputs["next"].get(key)
        if hop is None:
            raise TableCorruptionError(
                f"Node {node!r} has no successor for {key!r}"
            )
        self.post(hop, leg, key)

    def compute(self, inbox: Inbox, round_: int) -> None:  # noqa: D102
        for _, (leg, key) in inbox:
            self._arrive(round_, leg, key)
        self.vote_to_halt()


class FloodNode(Node):
    """Flood the witness of the cycle node through the network."""

    __slots__ = ()

    def init(self) -> None:  # noqa: D102
        if self.view.node == self.view.params["through"]:
            self._spread(0, None, self.view.params["witness"])
        self.vote_to_halt()

    def _spread(
        self, round_: int, sender: int | None, witness: tuple[int, ...]
    ) -> None:
        self.output["witness"] = witness
        self.output["round"] = round_
        for neighbor in self.view.ports:
            if neighbor != sender:
                self.post(neighbor, *witness)

    def compute(self, inbox: Inbox, round_: int) -> None:  # noqa: D102
        for sender, fields in inbox:
            if "witness" not in self.output:
                self._spread(round_, sender, fields)
        self.vote_to_halt()


def _trace(
    session: Session,
    through: int,
    legs: Sequence[tuple[int, int, int]],
    next_hops: Sequence[Mapping[int, int | None]],
    *,
    switch: bool,
) -> list[list[int]]:
    """Run the tracers and return the vertices of every leg in order."""
    starts: list[list[tuple[int, int]]] = [[] for _ in range(session.graph.n)]
    for leg, start, key in legs:
        starts[start].append((leg, key))
    outputs = session.run(
        TracerNode,
        label=f"trace-{through}",
        params={"switch": switch, "through": through},
        inputs=[
            {"next": next_hops[x], "start": tuple(starts[x])}
            for x in range(session.graph.n)
        ],
    )
    chains = []
    for leg, _, _ in legs:
        visited = sorted(
            (output["arrived"][leg], x)
            for x, output in enumerate(outputs)
            if leg in output["arrived"]
        )
        chains.append([x for _, x in visited] + [through])
    return chains


def _onfly_undirected(
    session: Session, table: ApspTable, u: int, witness: CycleWitness
) -> tuple[list[int], int]:
    graph = session.graph
    v, other = witness.first, witness.second
    assert other is not None  # nosec: B101
    flood = session.run(
        FloodNode,
        label=f"flood-{u}",
        params={"through": u, "witness": (v, other)},
    )
    notified = max(output["round"] for output in flood)
    legs = [
        (leg, start, u) for leg, start in enumerate((v, other)) if start != u
    ]
    chains = dict(
        zip(
            (leg for leg, _, _ in legs),
            _trace(
                session,
                u,
                legs,
                [{u: _hop(table, u, x)} for x in range(graph.n)],
                switch=False,
            ),
        )
    )
    to_v = chains.get(0, [u])
    from_other = chains.get(1, [u])
    return to_v[::-1] + from_other, notified


def construct_cycle(  # pylint: disable=too-many-arguments
    graph: Graph,
    result: CycleResult,
    u: int,
    mode: Mode = "table",
    *,
    tables: CycleTable | None = None,
    config: SimConfig | None = None,
) -> RouteTrace:
    """Send a message around the shortest cycle through u."""
    if not 0 <= u < graph.n:
        raise UsageError(f"No node {u!r} in a graph with n={graph.n!r}")
    table = _table_of(result)
    assert result.witnesses is not None  # nosec: B101
    witness = result.witnesses[u]
    if witness is None:
        LOGGER.info("No cycle passes through %d", u)
        return RouteTrace(vertices=(), rounds=0, weight=result.inf, through=u)
    session = Session(graph, config, name=f"cycle-{mode}")
    notified = 0
    if mode == "table":
        tables = tables or build_cycle_tables(graph, result, config=config)
        (walk,) = _trace(
            session,
            u,
            [(0, u, u)],
            tables.entries,
            switch=False,
        )
    elif mode == "onfly" and graph.directed:
        (walk,) = _trace(
            session,
            u,
            [(0, u, witness.first)],
            [
                {y: _hop(table, y, x) for y in range(graph.n)}
                for x in range(graph.n)
            ],
            switch=True,
        )
    elif mode == "onfly":
        walk, notified = _onfly_undirected(session, table, u, witness)
    else:
        raise UsageError(f"Unknown construction mode {mode!r}")
    return RouteTrace(
        vertices=tuple(walk),
        rounds=session.rounds,
        weight=walk_weight(graph, walk),
        through=u,
        notification_rounds=notified,
    )
