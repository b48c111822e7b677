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

"""The tests for the round simulator and its channels."""

from __future__ import annotations

import pytest

from congest_paths.congest.channel import Channel, word_size
from congest_paths.congest.simulator import (
    Inbox,
    Node,
    Session,
    SimConfig,
    decode_optional,
    encode_optional,
    run,
    word_bits_for,
)
from congest_paths.errors import BandwidthViolation, BudgetExhausted
from congest_paths.graph.graph import Graph

from . import config, cycle_graph, path_graph


class FloodNode(Node):
    """Flood a word from node 0 and remember when it arrived."""

    def init(self) -> None:  # noqa: D102
        if self.view.node == 0:
            self.output["round"] = 0
            for neighbor in self.view.ports:
                self.send(neighbor, 1)
        self.vote_to_halt()

    def compute(self, inbox: Inbox, round_: int) -> None:  # noqa: D102
        if "round" not in self.output:
            self.output["round"] = round_
            senders = {sender for sender, _ in inbox}
            for neighbor in self.view.ports:
                if neighbor not in senders:
                    self.send(neighbor, 1)
        self.vote_to_halt()


class DoubleSendNode(Node):
    """Send two words over one link in the same round."""

    def init(self) -> None:  # noqa: D102
        if self.view.node == 0:
            self.send(1, 1)
            self.send(1, 2)
        self.vote_to_halt()


class WideWordNode(Node):
    """Send a word that is wider than the bandwidth."""

    def init(self) -> None:  # noqa: D102
        if self.view.node == 0:
            self.send(1, 1 << 20)
        self.vote_to_halt()


class LongMessageNode(Node):
    """Post a message that needs two words."""

    def init(self) -> None:  # noqa: D102
        if self.view.node == 0:
            self.post(1, *([1] * 20))
        self.vote_to_halt()

    def compute(self, inbox: Inbox, round_: int) -> None:  # noqa: D102
        for _, fields in inbox:
            self.output["received"] = (round_, len(fields))
        self.vote_to_halt()


class RelayNode(Node):
    """Relay a hop count from node 0 along the arcs of weight 0."""

    def init(self) -> None:  # noqa: D102
        if self.view.node == 0:
            self.output["round"] = 0
            self.relay(1, 0)
        self.vote_to_halt()

    def compute(self, inbox: Inbox, round_: int) -> None:  # noqa: D102
        for _, (hops,) in inbox:
            self.output["round"] = round_
            self.output["hops"] = hops + 1
            if self.view.node + 1 in self.view.ports:
                self.relay(self.view.node + 1, hops + 1)
        self.vote_to_halt()


class SleepNode(Node):
    """Sleep until round 10 and record the wake up."""

    def init(self) -> None:  # noqa: D102
        if self.view.node == 0:
            self.sleep_until(10)
        else:
            self.vote_to_halt()

    def compute(self, inbox: Inbox, round_: int) -> None:  # noqa: D102
        self.output["woke"] = round_
        self.vote_to_halt()


def test_relay() -> None:
    """Test that relays over arcs of weight 0 arrive within the round."""
    graph = Graph.build(3, [(0, 1, 0), (1, 2, 0)], directed=True, weighted=True)
    report = run(graph, RelayNode)
    assert [output["round"] for output in report.outputs] == [0, 0, 0]
    assert report.outputs[2]["hops"] == 2
    assert report.rounds == 0
    assert report.words_sent == 2
    heavy = Graph.build(3, [(0, 1, 0), (1, 2, 3)], directed=True, weighted=True)
    with pytest.raises(BandwidthViolation, match="weight 0"):
        run(heavy, RelayNode)


def test_flooding() -> None:
    """Test that a flood on a path takes one round per hop."""
    report = run(path_graph(5), FloodNode)
    assert [output["round"] for output in report.outputs] == [0, 1, 2, 3, 4]
    assert report.rounds == 4
    assert report.words_sent == 4
    assert report.max_edge_load == 1
    assert report.charged_rounds is None
    assert len(report.phases) == 1
    # a cycle is flooded from both sides
    report = run(cycle_graph(6), FloodNode)
    assert [output["round"] for output in report.outputs] == [0, 1, 2, 3, 2, 1]
    assert report.rounds == 3


def test_threads() -> None:
    """Test that threaded execution gives the same result."""
    plain = run(cycle_graph(7), FloodNode)
    threaded = run(cycle_graph(7), FloodNode, SimConfig(threads=3))
    assert plain.outputs == threaded.outputs
    assert plain.rounds == threaded.rounds
    assert plain.words_sent == threaded.words_sent


def test_bandwidth() -> None:
    """Test that words are limited to one per link and round and B bits."""
    with pytest.raises(BandwidthViolation):
        run(path_graph(2), DoubleSendNode)
    with pytest.raises(BandwidthViolation):
        run(path_graph(4), WideWordNode)
    assert word_bits_for(4, 1, 4) == 12
    assert word_bits_for(1, 1, 1) == 1


def test_framing() -> None:
    """Test that long messages occupy the link for several rounds."""
    report = run(path_graph(4), LongMessageNode)
    assert report.outputs[1]["received"] == (2, 20)
    assert report.rounds == 2
    assert report.words_sent == 2


def test_budget() -> None:
    """Test that the round budget is enforced."""
    with pytest.raises(BudgetExhausted):
        run(path_graph(6), FloodNode, SimConfig(budget=2))
    assert run(path_graph(6), FloodNode, SimConfig(budget=5)).rounds == 5


def test_virtual_time() -> None:
    """Test that sleeping nodes are woken up at their round."""
    for virtual_time in (True, False):
        report = run(
            path_graph(3), SleepNode, SimConfig(virtual_time=virtual_time)
        )
        assert report.outputs[0]["woke"] == 10
        assert report.rounds == 10


def test_session() -> None:
    """Test that a session adds up its phases and charges subroutines."""
    graph = path_graph(4)
    session = Session(graph, SimConfig(charging={"apsp": 2.0}))
    session.run(FloodNode, label="first")
    session.run(FloodNode, label="second", subroutine="apsp")
    report = session.report()
    assert report.rounds == 6
    assert [phase.label for phase in report.phases] == ["first", "second"]
    # uncharged phases count their rounds, apsp is charged 2·n
    assert report.charged_rounds == 3 + 8
    assert report.as_dict()["rounds"] == 6
    assert sorted(report.as_dict()) == [
        "charged_rounds",
        "max_edge_load",
        "phases",
        "rounds",
        "word_bits",
        "word_factor",
        "words_sent",
    ]
    assert Session.attach(graph, session=session) is session
    with pytest.raises(ValueError):
        Session.attach(path_graph(4), session=session)


def test_sim_config() -> None:
    """Test the validation and loading of the simulator settings."""
    with pytest.raises(ValueError):
        SimConfig(budget=0)
    with pytest.raises(ValueError):
        SimConfig(word_factor=0)
    with pytest.raises(ValueError):
        SimConfig(threads=-1)
    with pytest.raises(ValueError):
        SimConfig(charging={"bfs": 1.0})
    sim = SimConfig.from_config(config())
    assert sim.seed == 7
    assert sim.budget == 200000
    assert sim.word_factor == 4
    assert sim.virtual_time
    assert sim.charging == {"apsp": 2.0, "sssp": 1.5}


def test_optional_encoding() -> None:
    """Test that optional ids fit into one field."""
    assert encode_optional(None) == 0
    assert encode_optional(0) == 1
    for value in (None, 0, 5):
        assert decode_optional(encode_optional(value)) == value


def test_channel() -> None:
    """Test priorities and keyed replacement in a channel."""
    channel = Channel(8)
    assert channel.idle
    channel.post((1,), (2,))
    channel.post((2,), (1,))
    assert len(channel) == 2
    assert channel.transmit() == (True, (2,))
    assert channel.transmit() == (True, (1,))
    assert channel.transmit() == (False, None)
    channel.post((1,), key="a")
    channel.post((3,), key="a")
    assert len(channel) == 1
    assert channel.transmit() == (True, (3,))
    assert channel.idle
    assert channel.post((255, 255), (0,)) == 2
    assert channel.transmit() == (True, None)
    channel.post((0,), (-1,))
    # a message in transmission is not interrupted
    assert channel.transmit() == (True, (255, 255))
    assert channel.transmit() == (True, (0,))


def test_word_size() -> None:
    """Test the bit count of fields."""
    assert word_size((0,)) == 1
    assert word_size((-1,)) == 2
    assert word_size((255,)) == 8
    assert word_size((1, 2, 3)) == 1 + 2 + 2
