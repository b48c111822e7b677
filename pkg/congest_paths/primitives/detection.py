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

"""Pipelined source detection and the BFS variants built on it.

Every node keeps the best known distance to each source and, once per
round, announces the smallest entry of its R closest sources that it has
not announced yet. Entries whose distance exceeds the cap are dropped.
In delayed mode an entry at distance d is not announced before round d,
which simulates subdividing every edge into a path of its weight.
Zero-weight arcs are relaxed within the round by relaying.
"""

from __future__ import annotations

import logging
from collections.abc import Collection, Iterable
from dataclasses import dataclass
from typing import Final, NamedTuple

from ..congest.simulator import (
    Inbox,
    Node,
    Session,
    decode_optional,
    encode_optional,
)
from ..graph.graph import Graph

LOGGER: Final = logging.getLogger(__name__)


class DetectionEntry(NamedTuple):
    """A source known to a node.

    The hop count of the path is only tracked with a hop limit.
    """

    dist: int
    source: int
    parent: int | None
    first: int | None
    hops: int = 0


@dataclass(frozen=True, slots=True)
class DetectionTable:
    """The detected sources of every node, closest first."""

    rows: tuple[tuple[DetectionEntry, ...], ...]
    limit: int
    cap: int

    def distance(self, node: int, source: int) -> int | None:
        """The detected distance from source to node."""
        for entry in self.rows[node]:
            if entry.source == source:
                return entry.dist
        return None

    def distances(self, node: int) -> dict[int, int]:
        """Map every detected source of the node to its distance."""
        return {entry.source: entry.dist for entry in self.rows[node]}


class DetectionNode(Node):
    """Announce one not yet announced entry of the top list per round.

    With a hop limit a node keeps, per source, every entry that no other
    entry beats in both distance and hops. In delayed mode improvements are
    relayed over zero-weight arcs within the round.
    """

    __slots__ = ("announced", "frontier", "relays", "targets")

    def init(self) -> None:  # noqa: D102
        params = self.view.params
        forbidden = params["forbidden"]
        node = self.view.node
        self.targets: list[int] = []
        self.relays: list[int] = []
        for v, port in self.view.ports.items():
            if params["respect_direction"] and port.out_weight is None:
                continue
            if (node, v) in forbidden or (
                not self.view.directed and (v, node) in forbidden
            ):
                continue
            if params["delayed"] and port.out_weight == 0:
                self.relays.append(v)
            else:
                self.targets.append(v)
        self.frontier: dict[int, list[DetectionEntry]] = {}
        self.announced: set[tuple[int, int, int]] = set()
        if node in params["sources"]:
            self._insert(DetectionEntry(0, node, None, None))
        self._announce(0)

    def _fields(self, entry: DetectionEntry, v: int) -> tuple[int, ...]:
        first = encode_optional(v if entry.first is None else entry.first)
        if self.view.params["hop_limit"] is None:
            return entry.dist, entry.source, first
        return entry.dist, entry.source, first, entry.hops

    def _insert(self, entry: DetectionEntry) -> None:
        """Store the entry unless a known one is at least as good."""
        front = self.frontier.setdefault(entry.source, [])
        if self.view.params["hop_limit"] is None:
            if front and front[0].dist <= entry.dist:
                return
            front[:] = [entry]
        else:
            if any(
                known.dist <= entry.dist and known.hops <= entry.hops
                for known in front
            ):
                return
            front[:] = sorted(
                [
                    known
                    for known in front
                    if known.dist < entry.dist or known.hops < entry.hops
                ]
                + [entry]
            )
        for v in self.relays:
            self.relay(v, *self._fields(entry, v))

    def _extendable(self, entry: DetectionEntry) -> bool:
        """Whether a neighbour can still use the entry."""
        params = self.view.params
        hop_limit = params["hop_limit"]
        if hop_limit is not None and entry.hops >= hop_limit:
            return False
        if params["unit"] or params["delayed"]:
            return entry.dist < params["cap"]
        return True

    def _top(self) -> list[DetectionEntry]:
        best = sorted(front[0] for front in self.frontier.values())
        return best[: self.view.params["limit"]]

    def _announce(self, round_: int) -> None:
        delayed = self.view.params["delayed"]
        top = self._top()
        self.output["entries"] = tuple(top)
        pending = sorted(
            entry
            for best in top
            for entry in self.frontier[best.source]
            if (entry.source, entry.dist, entry.hops) not in self.announced
            and self._extendable(entry)
        )
        ready = [e for e in pending if not delayed or e.dist <= round_]
        if ready and self._links_idle():
            entry = ready[0]
            self.announced.add((entry.source, entry.dist, entry.hops))
            for v in self.targets:
                self.post(v, *self._fields(entry, v))
            pending.remove(entry)
            ready.remove(entry)
        if ready or not self._links_idle():
            return
        if pending:
            self.sleep_until(min(entry.dist for entry in pending))
        else:
            self.vote_to_halt()

    def _links_idle(self) -> bool:
        return all(self.idle(v) for v in self.targets)

    def compute(self, inbox: Inbox, round_: int) -> None:  # noqa: D102
        cap = self.view.params["cap"]
        hop_limit = self.view.params["hop_limit"]
        unit = self.view.params["unit"]
        for sender, (dist, source, first, *rest) in inbox:
            port = self.view.ports[sender]
            weight = port.in_weight if port.in_weight is not None else 1
            dist += 1 if unit else weight
            hops = rest[0] + 1 if rest else 0
            if dist > cap or (hop_limit is not None and hops > hop_limit):
                continue
            self._insert(
                DetectionEntry(
                    dist, source, sender, decode_optional(first), hops
                )
            )
        self._announce(round_)


def detect(  # pylint: disable=too-many-arguments
    session: Session,
    sources: Iterable[int],
    *,
    limit: int | None = None,
    cap: int | None = None,
    unit: bool = True,
    delayed: bool = False,
    respect_direction: bool = True,
    forbidden: Collection[tuple[int, int]] = (),
    hop_limit: int | None = None,
    graph: Graph | None = None,
    label: str = "detection",
    subroutine: str | None = None,
) -> DetectionTable:
    """Run the detection engine and collect the tables of all nodes.

    With a hop limit only paths of at most that many edges are detected.
    """
    source_set = frozenset(sources)
    graph = graph or session.graph
    limit = len(source_set) if limit is None else limit
    cap = graph.inf - 1 if cap is None else cap
    if limit < 0 or cap < 0 or (hop_limit is not None and hop_limit < 0):
        raise ValueError(
            f"Invalid detection limits: R={limit!r} cap={cap!r} "
            f"h={hop_limit!r}"
        )
    outputs = session.run(
        DetectionNode,
        label=label,
        subroutine=subroutine,
        graph=graph,
        params={
            "cap": cap,
            "delayed": delayed,
            "forbidden": frozenset(forbidden),
            "hop_limit": hop_limit,
            "limit": limit,
            "respect_direction": respect_direction and graph.directed,
            "sources": source_set,
            "unit": unit,
        },
    )
    return DetectionTable(
        rows=tuple(output["entries"] for output in outputs),
        limit=limit,
        cap=cap,
    )


def source_detection(
    session: Session, sources: Iterable[int], limit: int, hops: int
) -> DetectionTable:
    """Find the R closest sources within h hops of every node."""
    if limit < 1:
        raise ValueError(f"R must be positive: {limit!r}")
    return detect(
        session,
        sources,
        limit=limit,
        cap=hops,
        respect_direction=False,
        label="source-detection",
    )


def hop_limited_bfs(  # pylint: disable=too-many-arguments
    session: Session,
    sources: Iterable[int],
    hops: int,
    *,
    respect_direction: bool = True,
    forbidden: Collection[tuple[int, int]] = (),
    reverse: bool = False,
    label: str = "hop-limited-bfs",
) -> DetectionTable:
    """BFS from all sources at once, up to the given number of hops."""
    return detect(
        session,
        sources,
        cap=hops,
        respect_direction=respect_direction,
        forbidden=forbidden,
        graph=session.graph.reversed() if reverse else None,
        label=label,
    )


def delayed_bfs(  # pylint: disable=too-many-arguments
    session: Session,
    scaled: Graph,
    sources: Iterable[int],
    cap: int,
    *,
    limit: int | None = None,
    forbidden: Collection[tuple[int, int]] = (),
    hop_limit: int | None = None,
    label: str = "delayed-bfs",
) -> DetectionTable:
    """BFS in which traversing an edge takes as many rounds as its weight.

    The resulting distances are the weighted distances in the scaled graph,
    truncated at the cap, over paths of at most hop_limit edges if given.
    Zero-weight arcs are traversed within the round.
    """
    return detect(
        session,
        sources,
        limit=limit,
        cap=cap,
        unit=False,
        delayed=True,
        forbidden=forbidden,
        hop_limit=hop_limit,
        graph=scaled,
        label=label,
    )
