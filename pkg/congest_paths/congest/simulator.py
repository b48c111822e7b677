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

"""A synchronous round simulator that enforces the CONGEST bandwidth.

Every vertex of the graph runs an instance of a :class:`Node` subclass.
Round 0 calls :meth:`Node.init`, every later round calls
:meth:`Node.compute` with the words that were sent in the previous round.
Messages relayed over zero-weight arcs are handled within the round.
Links are bidirectional regardless of the direction of the edges.
"""

from __future__ import annotations

import logging
import math
import os
import random
from collections.abc import Hashable, Iterator, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import TYPE_CHECKING, Any, ClassVar, Final

from ..errors import BandwidthViolation, BudgetExhausted
from ..graph.graph import Graph
from ..utils.utils import seeded_random
from .channel import Channel, Fields, word_size

if TYPE_CHECKING:
    from ..utils.better_config_parser import BetterConfigParser

LOGGER: Final = logging.getLogger(__name__)

DEFAULT_BUDGET: Final[int] = 5_000_000
DEFAULT_WORD_FACTOR: Final[int] = 4

type Message = tuple[int, Fields]
type Inbox = Sequence[Message]


def default_budget() -> int:
    """Get the default round budget, which can be set in the environment."""
    if raw := os.environ.get("CONGEST_PATHS_BUDGET"):
        return int(raw)
    return DEFAULT_BUDGET


def encode_optional(value: int | None) -> int:
    """Encode an optional non-negative id as one field."""
    return 0 if value is None else value + 1


def decode_optional(value: int) -> int | None:
    """Decode a field written by encode_optional."""
    return None if value == 0 else value - 1


def word_bits_for(n: int, max_weight: int, word_factor: int) -> int:
    """Get B = c_w·⌈log2(n·(W+1))⌉."""
    return word_factor * max(1, (n * (max_weight + 1) - 1).bit_length())


@dataclass(frozen=True, slots=True)
class Port:
    """The link to one neighbour with the weights of the arcs on it."""

    neighbor: int
    out_weight: int | None
    in_weight: int | None


@dataclass(frozen=True, slots=True)
class LocalView:  # pylint: disable=too-many-instance-attributes
    """Everything a node knows before the first round."""

    node: int
    n: int
    max_weight: int
    directed: bool
    word_bits: int
    ports: Mapping[int, Port]
    params: Mapping[str, Any]
    inputs: Mapping[str, Any]

    @property
    def inf(self) -> int:
        """The distance sentinel of the graph."""
        return self.n * self.max_weight + 1

    def in_neighbors(self) -> list[int]:
        """The neighbours with an arc towards this node."""
        return [
            v for v, port in self.ports.items() if port.in_weight is not None
        ]

    def out_neighbors(self) -> list[int]:
        """The neighbours reachable over an outgoing arc."""
        return [
            v for v, port in self.ports.items() if port.out_weight is not None
        ]


class Node:
    """The program run by one vertex.

    Subclasses override :meth:`init` and :meth:`compute` and put their
    results into :attr:`output`. A node computes in every round until it
    votes to halt; a word or a due timer wakes it up again.
    """

    __slots__ = (
        "_channels",
        "_halted",
        "_raw",
        "_relayed",
        "_round",
        "_wake_at",
        "output",
        "rng",
        "view",
    )

    def __init__(self, view: LocalView, rng: random.Random) -> None:
        """Create the node; the program starts in init."""
        self.view = view
        self.rng = rng
        self.output: dict[str, Any] = {}
        self._channels = {v: Channel(view.word_bits) for v in view.ports}
        self._halted = False
        self._raw: dict[int, Fields] = {}
        self._relayed: list[tuple[int, Fields]] = []
        self._round = 0
        self._wake_at: int | None = None

    def _check_link(self, neighbor: int, what: str) -> None:
        if neighbor not in self.view.ports:
            raise BandwidthViolation(
                self.view.node,
                (self.view.node, neighbor),
                self._round,
                f"{what} to a vertex that is not a neighbour",
            )

    def _is_due(self, round_: int) -> bool:
        return self._wake_at is not None and self._wake_at <= round_

    def _is_quiet(self) -> bool:
        return self._halted and all(
            channel.idle for channel in self._channels.values()
        )

    def _step(self, round_: int, inbox: Inbox) -> None:
        self._round = round_
        if not round_:
            self.init()
            return
        self._halted = False
        if self._is_due(round_):
            self._wake_at = None
        self.compute(inbox, round_)

    def _relax(self, round_: int, inbox: Inbox) -> None:
        self._round = round_
        self._halted = False
        self.compute(inbox, round_)

    def _transmit(self) -> Iterator[tuple[int, int, Fields | None]]:
        """Yield (neighbour, words on the link, delivered message)."""
        for neighbor, channel in self._channels.items():
            if neighbor in self._raw:
                yield neighbor, 1, self._raw[neighbor]
            else:
                sent, fields = channel.transmit()
                yield neighbor, int(sent), fields
        self._raw.clear()

    def compute(self, inbox: Inbox, round_: int) -> None:
        """Handle the words received in this round."""
        self.vote_to_halt()

    def idle(self, neighbor: int) -> bool:
        """Whether nothing is queued on the link to the neighbour."""
        return self._channels[neighbor].idle

    def init(self) -> None:
        """Set up the state of the node in round 0."""

    def post(
        self,
        neighbor: int,
        *fields: int,
        priority: tuple[int, ...] = (),
        key: Hashable | None = None,
    ) -> None:
        """Queue a message of any length on the link to the neighbour."""
        self._check_link(neighbor, "Posted a message")
        frames = self._channels[neighbor].post(fields, priority, key)
        if frames > 1:
            LOGGER.debug(
                "Node %d splits a message to %d into %d words",
                self.view.node,
                neighbor,
                frames,
            )

    def relay(self, neighbor: int, *fields: int) -> None:
        """Hand a message to the neighbour over a zero-weight arc.

        The neighbour computes again within the current round, so chains of
        zero-weight arcs settle before the next round starts.
        """
        self._check_link(neighbor, "Relayed a message")
        if self.view.ports[neighbor].out_weight != 0:
            raise BandwidthViolation(
                self.view.node,
                (self.view.node, neighbor),
                self._round,
                "relay over an arc without weight 0",
            )
        self._relayed.append((neighbor, fields))

    def send(self, neighbor: int, *fields: int) -> None:
        """Send one word to the neighbour in this round.

        The word preempts messages queued with post on the same link.
        """
        self._check_link(neighbor, "Sent a word")
        edge = (self.view.node, neighbor)
        if neighbor in self._raw:
            raise BandwidthViolation(
                self.view.node, edge, self._round, "second word on the link"
            )
        if not all(isinstance(part, int) for part in fields):
            raise TypeError(f"Words consist of integers, got {fields!r}")
        if (bits := word_size(fields)) > self.view.word_bits:
            raise BandwidthViolation(
                self.view.node,
                edge,
                self._round,
                f"word of {bits} bits exceeds B={self.view.word_bits}",
            )
        self._raw[neighbor] = fields

    def sleep_until(self, round_: int) -> None:
        """Halt until the given round, or until a word arrives."""
        self._wake_at = max(round_, self._round + 1)
        self._halted = True

    def vote_to_halt(self) -> None:
        """Stop computing until a word arrives."""
        self._halted = True


@dataclass(frozen=True, slots=True)
class SimConfig:
    """The configuration of the simulator."""

    seed: int = 0
    word_factor: int = DEFAULT_WORD_FACTOR
    budget: int = field(default_factory=default_budget)
    virtual_time: bool = True
    threads: int = 0
    charging: Mapping[str, float] | None = None

    CHARGED_SUBROUTINES: ClassVar[frozenset[str]] = frozenset({"apsp", "sssp"})

    def __post_init__(self) -> None:
        """Validate the configuration."""
        if self.budget <= 0:
            raise ValueError(
                f"The round budget must be positive: {self.budget!r}"
            )
        if self.word_factor < 1:
            raise ValueError(f"Invalid word factor: {self.word_factor!r}")
        if self.threads < 0:
            raise ValueError(f"Invalid thread count: {self.threads!r}")
        if self.charging is not None and (
            unknown := set(self.charging) - self.CHARGED_SUBROUTINES
        ):
            raise ValueError(f"Unknown charged subroutines: {unknown!r}")

    @classmethod
    def from_config(cls, config: BetterConfigParser) -> SimConfig:
        """Read the simulator settings from a config."""
        charging: dict[str, float] | None = None
        if config.getboolean("CHARGING", "ENABLED", fallback=False):
            charging = {
                "apsp": config.getfloat(
                    "CHARGING", "APSP_FACTOR", fallback=1.0
                ),
                "sssp": config.getfloat(
                    "CHARGING", "SSSP_FACTOR", fallback=1.0
                ),
            }
        return cls(
            seed=config.getint("GENERAL", "SEED", fallback=0),
            word_factor=config.getint(
                "SIMULATOR", "WORD_FACTOR", fallback=DEFAULT_WORD_FACTOR
            ),
            budget=config.getint(
                "SIMULATOR",
                "BUDGET",
                fallback=DEFAULT_BUDGET,
                env="CONGEST_PATHS_BUDGET",
            ),
            virtual_time=config.getboolean(
                "SIMULATOR", "VIRTUAL_TIME", fallback=True
            ),
            threads=config.getint("SIMULATOR", "THREADS", fallback=0),
            charging=charging,
        )


@dataclass(frozen=True, slots=True)
class PhaseReport:
    """The measurements of one simulator run."""

    label: str
    subroutine: str | None
    rounds: int
    words_sent: int
    max_edge_load: int
    charged_rounds: int


@dataclass(frozen=True, slots=True)
class SimReport:  # pylint: disable=too-many-instance-attributes
    """The measurements of a whole algorithm."""

    rounds: int
    words_sent: int
    max_edge_load: int
    word_bits: int
    word_factor: int
    charged_rounds: int | None
    phases: tuple[PhaseReport, ...]
    outputs: Any = None

    def as_dict(self) -> dict[str, Any]:
        """Convert the report to plain data, without the outputs."""
        return {
            "charged_rounds": self.charged_rounds,
            "max_edge_load": self.max_edge_load,
            "phases": [
                {
                    "charged_rounds": phase.charged_rounds,
                    "label": phase.label,
                    "rounds": phase.rounds,
                    "subroutine": phase.subroutine,
                    "words_sent": phase.words_sent,
                }
                for phase in self.phases
            ],
            "rounds": self.rounds,
            "word_bits": self.word_bits,
            "word_factor": self.word_factor,
            "words_sent": self.words_sent,
        }


def _collect_relayed(nodes: Sequence[Node]) -> dict[int, Inbox]:
    """Take the relayed messages of all nodes, grouped by receiver."""
    # pylint: disable=protected-access
    inboxes: dict[int, list[Message]] = {}
    for node in nodes:
        for neighbor, fields in node._relayed:
            inboxes.setdefault(neighbor, []).append((node.view.node, fields))
        node._relayed.clear()
    return {
        v: sorted(inbox, key=lambda message: message[0])
        for v, inbox in inboxes.items()
    }


class Session:
    """A sequence of simulator runs on one network sharing a round budget.

    Phases only hand over the outputs of the nodes, which are passed to the
    next phase as inputs.
    """

    # pylint: disable=protected-access

    __slots__ = ("_diameter", "config", "graph", "name", "phases", "word_bits")

    def __init__(
        self, graph: Graph, config: SimConfig | None = None, name: str = ""
    ) -> None:
        """Start a session on the network given by the graph."""
        self.graph = graph
        self.config = config or SimConfig()
        self.name = name
        self.phases: list[PhaseReport] = []
        self.word_bits = word_bits_for(
            graph.n, graph.max_weight, self.config.word_factor
        )
        self._diameter: int | None = None

    @classmethod
    def attach(
        cls,
        graph: Graph,
        config: SimConfig | None = None,
        session: Session | None = None,
        *,
        name: str = "",
    ) -> Session:
        """Continue the given session or start a new one on the graph."""
        if session is None:
            return cls(graph, config, name=name)
        if session.graph is not graph:
            raise ValueError("The session runs on a different network")
        return session

    @property
    def diameter(self) -> int:
        """The hop diameter of the network, used for charged accounting."""
        if self._diameter is None:
            self._diameter = self.graph.hop_diameter()
        return self._diameter

    @property
    def rounds(self) -> int:
        """The rounds used so far."""
        return sum(phase.rounds for phase in self.phases)

    def _charge(self, subroutine: str | None, rounds: int) -> int:
        charging = self.config.charging
        if charging is None or subroutine not in charging:
            return rounds
        factor = charging[subroutine]
        if subroutine == "apsp":
            return math.ceil(factor * self.graph.n)
        bound = (
            math.ceil(math.sqrt(self.graph.n) * self.diameter**0.25)
            + self.diameter
        )
        return math.ceil(factor * bound)

    def _make_nodes(
        self,
        node_class: type[Node],
        graph: Graph,
        label: str,
        params: Mapping[str, Any],
        inputs: Sequence[Mapping[str, Any]] | None,
    ) -> list[Node]:
        shared_params = MappingProxyType(dict(params))
        nodes = []
        for u in range(graph.n):
            ports = {
                v: Port(v, graph.out_adj[u].get(v), graph.in_adj[u].get(v))
                for v in graph.neighbors(u)
            }
            view = LocalView(
                node=u,
                n=graph.n,
                max_weight=self.graph.max_weight,
                directed=graph.directed,
                word_bits=self.word_bits,
                ports=MappingProxyType(ports),
                params=shared_params,
                inputs=MappingProxyType(dict(inputs[u] if inputs else {})),
            )
            rng = seeded_random(self.config.seed, label, u)
            nodes.append(node_class(view, rng))
        return nodes

    def report(self, outputs: Any = None) -> SimReport:
        """Summarize all phases run so far."""
        report = SimReport(
            rounds=self.rounds,
            words_sent=sum(phase.words_sent for phase in self.phases),
            max_edge_load=max(
                (phase.max_edge_load for phase in self.phases), default=0
            ),
            word_bits=self.word_bits,
            word_factor=self.config.word_factor,
            charged_rounds=(
                None
                if self.config.charging is None
                else sum(phase.charged_rounds for phase in self.phases)
            ),
            phases=tuple(self.phases),
            outputs=outputs,
        )
        LOGGER.info(
            "%s finished after %d rounds in %d phases",
            self.name or "Session",
            report.rounds,
            len(report.phases),
        )
        return report

    def run(  # pylint: disable=too-many-arguments, too-many-locals
        self,
        node_class: type[Node],
        *,
        label: str,
        subroutine: str | None = None,
        params: Mapping[str, Any] | None = None,
        inputs: Sequence[Mapping[str, Any]] | None = None,
        graph: Graph | None = None,
    ) -> list[dict[str, Any]]:
        """Run one program until the network is quiet and return the outputs.

        The graph may be replaced by one with the same links, e.g. the
        reversed graph.
        """
        graph = graph or self.graph
        if graph.n != self.graph.n:
            raise ValueError("A phase must run on the same network")
        nodes = self._make_nodes(node_class, graph, label, params or {}, inputs)
        remaining = self.config.budget - self.rounds
        words_sent = max_edge_load = last_computed = round_ = 0

        with ThreadPoolExecutor(max(1, self.config.threads)) as executor:

            def execute(
                active: list[Node], inboxes: dict[int, Inbox], relax: bool
            ) -> None:
                def step(node: Node) -> None:
                    inbox = inboxes.get(node.view.node, ())
                    if relax:
                        node._relax(round_, inbox)
                    else:
                        node._step(round_, inbox)

                if self.config.threads:
                    for _ in executor.map(step, active):
                        pass
                else:
                    for node in active:
                        step(node)

            def settle() -> int:
                relayed_words = 0
                while relayed := _collect_relayed(nodes):
                    relayed_words += sum(map(len, relayed.values()))
                    execute([nodes[v] for v in sorted(relayed)], relayed, True)
                return relayed_words

            execute(nodes, {}, False)
            words_sent += settle()
            while True:
                inboxes: dict[int, list[Message]] = {}
                for node in nodes:
                    for neighbor, load, fields in node._transmit():
                        words_sent += load
                        max_edge_load = max(max_edge_load, load)
                        if fields is not None:
                            inboxes.setdefault(neighbor, []).append(
                                (node.view.node, fields)
                            )
                timers = [
                    node._wake_at for node in nodes if node._wake_at is not None
                ]
                quiet = not inboxes and all(node._is_quiet() for node in nodes)
                if quiet and not timers:
                    break
                next_round = round_ + 1
                if quiet and self.config.virtual_time:
                    if (earliest := min(timers)) > next_round:
                        LOGGER.debug(
                            "Phase %s jumps from round %d to %d",
                            label,
                            round_,
                            earliest,
                        )
                        next_round = earliest
                if next_round > remaining:
                    raise BudgetExhausted(
                        self.config.budget, self.rounds + next_round, label
                    )
                round_ = next_round
                active = [
                    node
                    for node in nodes
                    if not node._halted
                    or node.view.node in inboxes
                    or node._is_due(round_)
                ]
                for inbox in inboxes.values():
                    inbox.sort(key=lambda message: message[0])
                if active:
                    last_computed = round_
                    execute(active, inboxes, False)  # type: ignore[arg-type]
                    words_sent += settle()

        phase = PhaseReport(
            label=label,
            subroutine=subroutine,
            rounds=last_computed,
            words_sent=words_sent,
            max_edge_load=max_edge_load,
            charged_rounds=self._charge(subroutine, last_computed),
        )
        self.phases.append(phase)
        LOGGER.debug(
            "Phase %s took %d rounds and %d words",
            label,
            phase.rounds,
            words_sent,
        )
        return [node.output for node in nodes]


def run(
    graph: Graph,
    node_class: type[Node],
    config: SimConfig | None = None,
    *,
    label: str = "run",
    params: Mapping[str, Any] | None = None,
) -> SimReport:
    """Run a single program on the graph and report on it."""
    session = Session(graph, config, name=label)
    outputs = session.run(node_class, label=label, params=params)
    return session.report(outputs)
