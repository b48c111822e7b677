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

"""Pipelined convergecast and broadcast over a BFS tree, and sampling."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from typing import Final, Literal

from ..congest.simulator import Inbox, Node, Session
from .bfs import BfsTree

LOGGER: Final = logging.getLogger(__name__)

ITEM: Final[int] = 0
END: Final[int] = 1

type Value = tuple[int, ...]
type Combiner = Literal["concat", "max", "min", "sum"]

COMBINERS: Final[dict[str, Callable[[Value, Value], Value]]] = {
    "max": max,
    "min": min,
    "sum": lambda a, b: tuple(x + y for x, y in zip(a, b, strict=True)),
}


class CombineNode(Node):
    """Combine the k values of the subtree and broadcast the root's result.

    Value i goes up as soon as all children reported their value i, and
    down as soon as the parent sent it, so both directions are pipelined.
    """

    __slots__ = ("acc", "combine", "missing", "result")

    def init(self) -> None:  # noqa: D102
        inputs = self.view.inputs
        self.combine = COMBINERS[self.view.params["combiner"]]
        self.acc: list[Value] = list(inputs["values"])
        self.missing = [len(inputs["children"])] * len(self.acc)
        self.result: list[Value | None] = [None] * len(self.acc)
        self.output["result"] = self.result
        for index in range(len(self.acc)):
            self._report(index)
        self.vote_to_halt()

    def _report(self, index: int) -> None:
        if self.missing[index]:
            return
        parent = self.view.inputs["parent"]
        if parent is None:
            self._publish(index, self.acc[index])
        else:
            self.post(parent, index, *self.acc[index], priority=(index,))

    def _publish(self, index: int, value: Value) -> None:
        self.result[index] = value
        for child in self.view.inputs["children"]:
            self.post(child, index, *value, priority=(index,))

    def compute(self, inbox: Inbox, round_: int) -> None:  # noqa: D102
        parent = self.view.inputs["parent"]
        for sender, (index, *value) in inbox:
            if sender == parent:
                self._publish(index, tuple(value))
                continue
            self.acc[index] = self.combine(self.acc[index], tuple(value))
            self.missing[index] -= 1
            self._report(index)
        self.vote_to_halt()


class ConcatNode(Node):
    """Collect all items at the root and broadcast them back down.

    Every link carries its items followed by an end marker.
    """

    __slots__ = ("items", "pending")

    def init(self) -> None:  # noqa: D102
        inputs = self.view.inputs
        self.items: list[Value] = list(inputs["values"])
        self.pending = len(inputs["children"])
        self.output["result"] = None
        if inputs["parent"] is not None:
            for item in self.items:
                self.post(inputs["parent"], ITEM, *item)
            self.items = []
        self._collected()
        self.vote_to_halt()

    def _collected(self) -> None:
        if self.pending:
            return
        parent = self.view.inputs["parent"]
        if parent is not None:
            self.post(parent, END)
            return
        self.output["result"] = sorted(self.items)
        for child in self.view.inputs["children"]:
            for item in self.output["result"]:
                self.post(child, ITEM, *item)
            self.post(child, END)

    def compute(self, inbox: Inbox, round_: int) -> None:  # noqa: D102
        inputs = self.view.inputs
        parent = inputs["parent"]
        for sender, (kind, *fields) in inbox:
            item = tuple(fields)
            if sender != parent:
                if kind == END:
                    self.pending -= 1
                    self._collected()
                elif parent is None:
                    self.items.append(item)
                else:
                    self.post(parent, ITEM, *item)
                continue
            for child in inputs["children"]:
                self.post(child, kind, *item)
            if kind == END:
                self.output["result"] = sorted(self.items)
            else:
                self.items.append(item)
        self.vote_to_halt()


def broadcast_aggregate(
    session: Session,
    tree: BfsTree,
    values: Sequence[Sequence[Value]],
    combiner: Combiner,
    *,
    label: str = "aggregate",
) -> list[Value]:
    """Combine the values of all nodes and let every node know the result.

    For min, max and sum every node gives k tuples and the result holds the
    elementwise combination. For concat every node gives any number of
    tuples and the result is the sorted list of all of them.
    """
    if combiner != "concat" and len({len(row) for row in values}) > 1:
        raise ValueError("Every node has to give the same number of values")
    inputs = [
        {
            "children": tree.children[u],
            "parent": tree.parent[u],
            "values": tuple(values[u]),
        }
        for u in range(session.graph.n)
    ]
    if combiner == "concat":
        node_class: type[Node] = ConcatNode
    else:
        node_class = CombineNode
    outputs = session.run(
        node_class,
        label=label,
        params={"combiner": combiner},
        inputs=inputs,
    )
    result = outputs[tree.root]["result"]
    assert all(output["result"] == result for output in outputs)  # nosec: B101
    return list(result)


def sampling_probability(n: int, hops: int) -> float:
    """Get min(1, 2·ln n / h), enough to hit every path of h vertices whp."""
    return min(1.0, 2 * math.log(n) / hops) if hops > 0 else 1.0


class SampleNode(Node):
    """Join the sample with the configured probability."""

    def init(self) -> None:  # noqa: D102
        prob = self.view.params["prob"]
        self.output["sampled"] = prob > 0 and self.rng.random() < prob
        self.vote_to_halt()


def sample_vertices(
    session: Session,
    tree: BfsTree,
    prob: float,
    *,
    label: str = "sample",
) -> frozenset[int]:
    """Sample every vertex independently and announce the sample size."""
    if not 0 <= prob <= 1:
        raise ValueError(f"Invalid probability: {prob!r}")
    outputs = session.run(SampleNode, label=label, params={"prob": prob})
    sample = frozenset(
        u for u, output in enumerate(outputs) if output["sampled"]
    )
    (size,) = broadcast_aggregate(
        session,
        tree,
        [[(int(output["sampled"]),)] for output in outputs],
        "sum",
        label=f"{label}-size",
    )
    LOGGER.debug("Sampled %d of %d vertices", size[0], session.graph.n)
    return sample
