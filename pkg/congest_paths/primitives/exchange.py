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

"""Send local state to all neighbours."""

from __future__ import annotations

from collections.abc import Sequence

from ..congest.simulator import Inbox, Node, Session

type Item = tuple[int, ...]


class ExchangeNode(Node):
    """Post every item to every neighbour, the channels frame them."""

    __slots__ = ("received",)

    def init(self) -> None:  # noqa: D102
        self.received: dict[int, list[Item]] = {}
        self.output["received"] = self.received
        for neighbor in self.view.ports:
            for item in self.view.inputs["items"]:
                self.post(neighbor, *item)
        self.vote_to_halt()

    def compute(self, inbox: Inbox, round_: int) -> None:  # noqa: D102
        for sender, fields in inbox:
            self.received.setdefault(sender, []).append(tuple(fields))
        self.vote_to_halt()


def exchange(
    session: Session,
    items: Sequence[Sequence[Item]],
    *,
    label: str = "exchange",
) -> list[dict[int, list[Item]]]:
    """Give every node the items of each of its neighbours.

    The items of one sender arrive in the order they were given. With k
    items per node this takes about k rounds.
    """
    outputs = session.run(
        ExchangeNode,
        label=label,
        inputs=[{"items": tuple(row)} for row in items],
    )
    return [output["received"] for output in outputs]
