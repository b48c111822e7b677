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

"""Routing tables, on-the-fly state and the traces of routed messages."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import NamedTuple

from ..congest.simulator import SimReport
from ..errors import MissingWitnessError, TableCorruptionError
from ..graph.graph import Graph, PathSpec
from ..rpaths.result import RPathsResult, Weight, Witness


class RouteEntry(NamedTuple):
    """Where a node sends the message when one path edge failed."""

    on_path: bool
    next_hop: int


@dataclass(frozen=True, slots=True)
class RoutingTable:
    """entries[x][j] is the entry of node x for the failure of edge j."""

    algorithm: str
    path: PathSpec
    weights: tuple[Weight, ...]
    entries: tuple[Mapping[int, RouteEntry], ...]
    h_rep: int
    inf: int
    report: SimReport | None = None

    @property
    def size(self) -> int:
        """The largest number of entries stored at one node."""
        return max((len(row) for row in self.entries), default=0)

    def next_hop(self, node: int, index: int) -> int | None:
        """Get the next hop of the node for the failure of edge index."""
        entry = self.entries[node].get(index)
        return None if entry is None else entry.next_hop


@dataclass(frozen=True, slots=True)
class CycleTable:
    """entries[x][u] is the next hop of x on the cycle through u."""

    algorithm: str
    weights: tuple[Weight, ...]
    entries: tuple[Mapping[int, int], ...]
    inf: int
    report: SimReport | None = None


@dataclass(frozen=True, slots=True)
class OnFlyState:
    """The state kept for constructing undirected replacement paths.

    Only s stores the witnesses with the hop distance of their deviation
    vertex. Every other node keeps its parent in both shortest path trees
    and its children in the tree of s.
    """

    path: PathSpec
    weights: tuple[Weight, ...]
    witnesses: tuple[Witness | None, ...]
    depth: tuple[int, ...]
    parent_s: tuple[int | None, ...]
    parent_t: tuple[int | None, ...]
    children_s: tuple[tuple[int, ...], ...]
    inf: int

    @classmethod
    def from_result(cls, result: RPathsResult) -> OnFlyState:
        """Take the state from an undirected replacement paths result."""
        if result.algorithm != "rp-undir":
            raise MissingWitnessError(
                f"On-the-fly construction needs rp-undir, "
                f"got {result.algorithm!r}"
            )
        from_s, to_t = result.trees["from_s"], result.trees["to_t"]
        children: list[list[int]] = [[] for _ in from_s.parent]
        for x, parent in enumerate(from_s.parent):
            if parent is not None:
                children[parent].append(x)
        return cls(
            path=result.path,
            weights=result.weights,
            witnesses=result.witnesses,
            depth=tuple(
                0 if witness is None else from_s.hops[witness.first]
                for witness in result.witnesses
            ),
            parent_s=from_s.parent,
            parent_t=to_t.parent,
            children_s=tuple(tuple(row) for row in children),
            inf=result.inf,
        )


@dataclass(frozen=True, slots=True)
class RouteTrace:  # pylint: disable=too-many-instance-attributes
    """The vertices a message traversed and what it cost.

    A trace without vertices means that no path or cycle exists. The rounds
    include the notification, which notification_rounds count separately.
    stored is the largest number of entries a node other than s had to
    keep for the construction.
    """

    vertices: tuple[int, ...]
    rounds: int
    weight: Weight
    failed: tuple[int, int] | None = None
    through: int | None = None
    notification_rounds: int = 0
    stored: int = 0

    @property
    def found(self) -> bool:
        """Whether a path or cycle was constructed."""
        return bool(self.vertices)

    @property
    def hops(self) -> int:
        """The number of edges traversed."""
        return max(0, len(self.vertices) - 1)


def walk_weight(graph: Graph, vertices: Sequence[int]) -> int:
    """Sum the weights of the arcs between consecutive vertices."""
    return sum(graph.weight(u, v) for u, v in zip(vertices, vertices[1:]))


def follow_pointers(
    next_hop: Mapping[int, int], start: int, stop: int, limit: int
) -> list[int]:
    """Follow next hops from start until stop, failing on a pointer cycle."""
    vertices = [start]
    while vertices[-1] != stop:
        if (hop := next_hop.get(vertices[-1])) is None:
            raise TableCorruptionError(
                f"No next hop at {vertices[-1]!r} on the way to {stop!r}"
            )
        if len(vertices) > limit:
            raise TableCorruptionError(
                f"Pointer cycle while following {vertices[:8]!r}..."
            )
        vertices.append(hop)
    return vertices
