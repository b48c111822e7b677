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

"""All pairs shortest paths with first hop pointers.

Weighted graphs use a Bellman-Ford per source. Source number i starts in
round i and every link forwards the pending update of the smallest source
first. The computation may run on an overlay graph whose additional
vertices are simulated by real nodes.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import NamedTuple

from ..congest.simulator import (
    Inbox,
    Node,
    Session,
    decode_optional,
    encode_optional,
)
from ..graph.graph import Edge
from .detection import detect


class ApspEntry(NamedTuple):
    """The distance from a source with the first and last real hops."""

    dist: int
    first: int | None
    last: int | None


@dataclass(frozen=True, slots=True)
class Overlay:
    """Additional vertices and arcs simulated on top of the network.

    Every additional vertex is simulated by its host. Every arc has to join
    vertices with the same host or hosts that are neighbours.
    """

    host: Mapping[int, int]
    arcs: tuple[Edge, ...]
    removed: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def host_of(self, vertex: int) -> int:
        """Get the network node that simulates the vertex."""
        return self.host.get(vertex, vertex)


@dataclass(frozen=True, slots=True)
class ApspTable:
    """The rows of all vertices: rows[v][u] describes the paths from u to v.

    On the reversed graph rows[v][u] describes the paths from v to u, and
    last is the next hop of v towards u.
    """

    rows: Mapping[int, Mapping[int, ApspEntry]]
    inf: int

    def dist(self, u: int, v: int) -> int:
        """The distance from u to v as known at v."""
        entry = self.rows[v].get(u)
        return self.inf if entry is None else entry.dist

    def entry(self, u: int, v: int) -> ApspEntry | None:
        """The entry for the paths from u to v."""
        return self.rows[v].get(u)


def _rank(entry: ApspEntry) -> tuple[int, int]:
    return entry.dist, -1 if entry.first is None else entry.first


class ApspNode(Node):
    """Bellman-Ford for many sources with local relaxation of hosted arcs."""

    __slots__ = (
        "incoming",
        "local",
        "remote",
        "starts",
        "table",
    )

    def init(self) -> None:  # noqa: D102
        node = self.view.node
        overlay: Overlay | None = self.view.params["overlay"]
        removed = overlay.removed if overlay else frozenset()
        hosted = {node}
        if overlay:
            hosted.update(x for x, h in overlay.host.items() if h == node)
        self.local: dict[int, list[tuple[int, int]]] = {}
        self.remote: dict[int, set[int]] = {}
        self.incoming: dict[int, list[tuple[int, int]]] = {}
        for v, port in self.view.ports.items():
            if port.out_weight is not None and (node, v) not in removed:
                self.remote.setdefault(node, set()).add(v)
            if port.in_weight is not None and (v, node) not in removed:
                self.incoming.setdefault(v, []).append((node, port.in_weight))
        for x, y, w in overlay.arcs if overlay else ():
            assert overlay  # nosec: B101
            tail, head = overlay.host_of(x), overlay.host_of(y)
            if tail == head == node:
                self.local.setdefault(x, []).append((y, w))
            elif tail == node:
                self.remote.setdefault(x, set()).add(head)
            elif head == node:
                self.incoming.setdefault(x, []).append((y, w))
        sources: tuple[int, ...] = self.view.params["sources"]
        self.starts = sorted(
            (index, x) for index, x in enumerate(sources) if x in hosted
        )
        self.table: dict[int, dict[int, ApspEntry]] = {x: {} for x in hosted}
        self.output["rows"] = self.table
        self._start_sources(0)

    def _relax(
        self, x: int, src: int, entry: ApspEntry, y: int, w: int
    ) -> bool:
        real = self.view.n
        candidate = ApspEntry(
            entry.dist + w,
            (y if y < real else None) if entry.first is None else entry.first,
            x if x < real else entry.last,
        )
        current = self.table[y].get(src)
        # equal distances keep the smaller first hop
        if current is not None and _rank(current) <= _rank(candidate):
            return False
        self.table[y][src] = candidate
        return True

    def _settle(self, changed: set[tuple[int, int]]) -> None:
        """Relax hosted arcs to a fixpoint and forward all changes."""
        work = list(changed)
        while work:
            x, src = work.pop()
            entry = self.table[x][src]
            for y, w in self.local.get(x, ()):
                if self._relax(x, src, entry, y, w):
                    changed.add((y, src))
                    work.append((y, src))
        index = self.view.params["index"]
        plain = self.view.params["overlay"] is None
        for x, src in sorted(changed):
            entry = self.table[x][src]
            for host in sorted(self.remote.get(x, ())):
                if plain:
                    fields = (src, entry.dist, encode_optional(entry.first))
                else:
                    fields = (
                        x,
                        src,
                        entry.dist,
                        encode_optional(entry.first),
                        encode_optional(entry.last),
                    )
                self.post(host, *fields, priority=(index[src],), key=(x, src))

    def _start_sources(self, round_: int) -> None:
        changed: set[tuple[int, int]] = set()
        while self.starts and self.starts[0][0] <= round_:
            _, x = self.starts.pop(0)
            self.table[x][x] = ApspEntry(0, None, None)
            changed.add((x, x))
        self._settle(changed)
        if self.starts:
            self.sleep_until(self.starts[0][0])
        else:
            self.vote_to_halt()

    def compute(self, inbox: Inbox, round_: int) -> None:  # noqa: D102
        changed: set[tuple[int, int]] = set()
        plain = self.view.params["overlay"] is None
        for sender, fields in inbox:
            if plain:
                src, dist, first = fields
                x, entry = sender, ApspEntry(dist, decode_optional(first), None)
            else:
                x, src, dist, first, last = fields
                entry = ApspEntry(
                    dist, decode_optional(first), decode_optional(last)
                )
            for y, w in self.incoming.get(x, ()):
                if self._relax(x, src, entry, y, w):
                    changed.add((y, src))
        self._settle(changed)
        self._start_sources(round_)


def apsp(
    session: Session,
    overlay: Overlay | None = None,
    sources: Iterable[int] | None = None,
    *,
    reverse: bool = False,
    label: str = "apsp",
) -> ApspTable:
    """Compute the distances from all sources to all vertices.

    Unweighted graphs without an overlay use pipelined BFS from all
    sources. Zero weight arcs between vertices of one host are relaxed
    within a round.
    """
    graph = session.graph.reversed() if reverse else session.graph
    source_list = tuple(
        sorted(range(graph.n) if sources is None else set(sources))
    )
    if overlay is None and not graph.weighted:
        detected = detect(
            session,
            source_list,
            graph=graph,
            label=label,
            subroutine="apsp",
        )
        return ApspTable(
            rows={
                v: {
                    entry.source: ApspEntry(
                        entry.dist, entry.first, entry.parent
                    )
                    for entry in row
                }
                for v, row in enumerate(detected.rows)
            },
            inf=graph.inf,
        )
    outputs = session.run(
        ApspNode,
        label=label,
        subroutine="apsp",
        graph=graph,
        params={
            "index": {x: i for i, x in enumerate(source_list)},
            "overlay": overlay,
            "sources": source_list,
        },
    )
    rows: dict[int, dict[int, ApspEntry]] = {}
    for output in outputs:
        rows.update(output["rows"])
    return ApspTable(rows=rows, inf=graph.inf)
