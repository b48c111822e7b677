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

"""Breadth first search trees over the communication links."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Final

from ..congest.simulator import Inbox, Node, Session

EXPLORE: Final[int] = 0
ADOPT: Final[int] = 1


@dataclass(frozen=True, slots=True)
class BfsTree:
    """A BFS tree of the network with its measured depth."""

    root: int
    dist: tuple[int, ...]
    parent: tuple[int | None, ...]
    children: tuple[tuple[int, ...], ...]

    @property
    def eccentricity(self) -> int:
        """The depth of the tree, which is at most the hop diameter."""
        return max(self.dist)


class BfsNode(Node):
    """Join the tree on the first explore word and adopt the sender."""

    __slots__ = ("children", "dist", "parent")

    def init(self) -> None:  # noqa: D102
        self.dist: int | None = None
        self.parent: int | None = None
        self.children: list[int] = []
        if self.view.node == self.view.params["root"]:
            self.dist = 0
            for neighbor in self.view.ports:
                self.send(neighbor, EXPLORE, 0)
        self._store()
        self.vote_to_halt()

    def _store(self) -> None:
        self.output.update(
            dist=self.dist, parent=self.parent, children=tuple(self.children)
        )

    def compute(self, inbox: Inbox, round_: int) -> None:  # noqa: D102
        for sender, (kind, value) in inbox:
            if kind == ADOPT:
                self.children.append(sender)
            elif self.dist is None:
                self.dist = value + 1
                self.parent = sender
        if self.dist is not None and self.dist == round_:
            for neighbor in self.view.ports:
                if neighbor == self.parent:
                    self.send(neighbor, ADOPT, 0)
                else:
                    self.send(neighbor, EXPLORE, self.dist)
        self._store()
        self.vote_to_halt()


def bfs_tree(session: Session, root: int, *, label: str = "bfs") -> BfsTree:
    """Build a BFS tree rooted at root in at most ecc(root) + 1 rounds."""
    outputs = session.run(BfsNode, label=label, params={"root": root})
    return BfsTree(
        root=root,
        dist=tuple(output["dist"] for output in outputs),
        parent=tuple(output["parent"] for output in outputs),
        children=tuple(tuple(sorted(output["children"])) for output in outputs),
    )
