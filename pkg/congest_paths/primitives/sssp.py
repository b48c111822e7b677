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

"""Single source shortest paths with distributed Bellman-Ford."""

from __future__ import annotations

import math
from collections.abc import Collection, Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Final

from ..congest.simulator import (
    Inbox,
    Node,
    Session,
    decode_optional,
    encode_optional,
)
from ..graph.graph import scale_weights
from .detection import delayed_bfs

STATE_KEY: Final[str] = "state"


@dataclass(frozen=True, slots=True)
class SsspResult:
    """Distances from (or towards) one source with the shortest path tree.

    The anchor of a vertex is the last anchor vertex on its tree path from
    the source, if anchors were requested.
    """

    source: int
    dist: tuple[int, ...]
    parent: tuple[int | None, ...]
    hops: tuple[int, ...]
    anchor: tuple[int | None, ...]


class SsspNode(Node):
    """Relax incoming distances and forward every change."""

    __slots__ = ("anchor", "dist", "hops", "parent", "targets")

    def init(self) -> None:  # noqa: D102
        params = self.view.params
        node = self.view.node
        forbidden = params["forbidden"]
        self.targets = [
            v
            for v, port in self.view.ports.items()
            if port.out_weight is not None
            and (node, v) not in forbidden
            and (self.view.directed or (v, node) not in forbidden)
        ]
        self.dist = self.view.inf
        self.hops = self.view.inf
        self.parent: int | None = None
        self.anchor: int | None = None
        if node == params["source"]:
            self.dist = self.hops = 0
            self.anchor = self._own_anchor(None)
            self._forward()
        self._store()
        self.vote_to_halt()

    def _forward(self) -> None:
        for v in self.targets:
            self.post(
                v,
                self.dist,
                self.hops,
                encode_optional(self.anchor),
                key=STATE_KEY,
            )

    def _own_anchor(self, inherited: int | None) -> int | None:
        anchors = self.view.params["anchors"]
        if anchors is not None and self.view.node in anchors:
            return self.view.node
        return inherited

    def _rank(self, sender: int | None) -> int:
        preferred = self.view.params["preferred"].get(self.view.node)
        return 0 if sender is not None and sender == preferred else 1

    def _store(self) -> None:
        self.output.update(
            dist=self.dist,
            parent=self.parent,
            hops=self.hops,
            anchor=self.anchor,
        )

    def compute(self, inbox: Inbox, round_: int) -> None:  # noqa: D102
        changed = False
        for sender, (dist, hops, anchor) in inbox:
            weight = self.view.ports[sender].in_weight
            if weight is None:
                continue
            candidate = (dist + weight, self._rank(sender), sender)
            current = (
                self.dist,
                self._rank(self.parent),
                self.view.n if self.parent is None else self.parent,
            )
            state = (hops + 1, self._own_anchor(decode_optional(anchor)))
            if candidate < current or (
                sender == self.parent and state != (self.hops, self.anchor)
            ):
                self.dist, _, self.parent = candidate
                self.hops, self.anchor = state
                changed = True
        if changed:
            self._forward()
            self._store()
        self.vote_to_halt()


def sssp(  # pylint: disable=too-many-arguments
    session: Session,
    source: int,
    *,
    forbidden: Collection[tuple[int, int]] = (),
    reverse: bool = False,
    anchors: Iterable[int] | None = None,
    preferred: Mapping[int, int] | None = None,
    label: str = "sssp",
) -> SsspResult:
    """Compute exact distances from source, or towards it if reverse is set.

    Forbidden arcs are never relaxed. Ties are broken towards the preferred
    parent of a vertex, then towards the smaller parent id.
    """
    graph = session.graph.reversed() if reverse else session.graph
    outputs = session.run(
        SsspNode,
        label=label,
        subroutine="sssp",
        graph=graph,
        params={
            "anchors": None if anchors is None else frozenset(anchors),
            "forbidden": (
                frozenset((v, u) for u, v in forbidden)
                if reverse
                else frozenset(forbidden)
            ),
            "preferred": dict(preferred or {}),
            "source": source,
        },
    )
    inf = session.graph.inf
    return SsspResult(
        source=source,
        dist=tuple(min(output["dist"], inf) for output in outputs),
        parent=tuple(output["parent"] for output in outputs),
        hops=tuple(output["hops"] for output in outputs),
        anchor=tuple(output["anchor"] for output in outputs),
    )


def approx_levels(hops: int, max_weight: int) -> range:
    """The scaling levels needed for paths of up to hops edges."""
    return range(1, (hops * max_weight).bit_length() + 2)


def approx_msssp(  # pylint: disable=too-many-arguments
    session: Session,
    sources: Iterable[int],
    hops: int,
    eps: Fraction,
    *,
    forbidden: Collection[tuple[int, int]] = (),
    label: str = "approx-msssp",
) -> list[dict[int, Fraction]]:
    """Compute (1+eps)-approximate hop limited distances from all sources.

    Every level i scales the weights by σ = eps·2^i/(2h) and runs a delayed
    BFS up to distance ⌈(1+2/eps)·h⌉. Level 0 runs on the original weights,
    which is the only level of unweighted graphs.
    Only paths with at most h edges are followed, so every estimate is at
    least the weight of such a path and at most (1+eps) times the shortest
    distance over paths with at most h edges.
    """
    if eps <= 0 or hops < 1:
        raise ValueError(f"Invalid parameters: eps={eps!r} h={hops!r}")
    source_set = frozenset(sources)
    graph = session.graph
    cap = math.ceil((1 + 2 / eps) * hops) if graph.weighted else hops
    estimates: list[dict[int, Fraction]] = [{} for _ in range(graph.n)]
    levels: list[tuple[Fraction, int]] = [(Fraction(1), 0)]
    if graph.weighted:
        levels.extend(
            (eps * 2**i / (2 * hops), i)
            for i in approx_levels(hops, graph.max_weight)
        )
    for sigma, i in levels:
        scaled = scale_weights(graph, i, eps, hops) if i else graph
        table = delayed_bfs(
            session,
            scaled,
            source_set,
            cap,
            forbidden=forbidden,
            hop_limit=hops,
            label=f"{label}-{i}",
        )
        for v, row in enumerate(table.rows):
            for entry in row:
                estimate = sigma * entry.dist
                if estimate < estimates[v].get(entry.source, estimate + 1):
                    estimates[v][entry.source] = estimate
    return estimates
