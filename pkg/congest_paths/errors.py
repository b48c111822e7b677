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

"""The exceptions raised by congest-paths."""

from __future__ import annotations

from typing import ClassVar


class CongestPathsError(Exception):
    """Base class of all errors raised by this package."""

    exit_code: ClassVar[int] = 1


class UsageError(CongestPathsError):
    """An unknown algorithm, corpus or graph source was requested."""

    exit_code = 2


class GraphFormatError(CongestPathsError, ValueError):
    """The graph is not valid."""

    exit_code = 4


class MalformedHeaderError(GraphFormatError):
    """The header line of a graph file could not be parsed."""


class MalformedEdgeError(GraphFormatError):
    """An edge line of a graph file could not be parsed."""


class EdgeCountMismatchError(GraphFormatError):
    """The number of edges differs from the one announced in the header."""


class VertexOutOfRangeError(GraphFormatError):
    """A vertex id is not in 0..n-1."""


class NegativeWeightError(GraphFormatError):
    """An edge has a negative weight."""


class SelfLoopError(GraphFormatError):
    """An edge connects a vertex with itself."""


class DuplicateEdgeError(GraphFormatError):
    """An edge is given more than once."""


class DisconnectedGraphError(GraphFormatError):
    """The underlying undirected graph is not connected."""


class InvalidPathError(GraphFormatError):
    """A path is discontinuous or not a shortest path."""


class WeightOverflowError(GraphFormatError):
    """Scaled weights do not fit into the sentinel range."""


class ConnectivityRetriesExceeded(GraphFormatError):
    """No connected random graph was found within the retry budget."""


class InvalidGadgetSpecError(CongestPathsError, ValueError):
    """A gadget spec violates its invariants."""

    exit_code = 2


class BandwidthViolation(CongestPathsError):
    """A node tried to send more than the CONGEST model allows."""

    def __init__(
        self, node: int, edge: tuple[int, int], round_: int, reason: str
    ) -> None:
        """Remember where the violation happened."""
        super().__init__(
            f"bandwidth violation by node {node!r} on edge {edge!r} "
            f"in round {round_!r}: {reason}"
        )
        self.node = node
        self.edge = edge
        self.round = round_


class BudgetExhausted(CongestPathsError):
    """The round budget was used up before the network became quiet."""

    exit_code = 3

    def __init__(self, budget: int, round_: int, label: str) -> None:
        """Remember the budget and how far the execution got."""
        super().__init__(
            f"round budget of {budget!r} exhausted in phase {label!r} "
            f"at round {round_!r}"
        )
        self.budget = budget
        self.round = round_


class TableCorruptionError(CongestPathsError):
    """Following routing pointers did not terminate."""


class MissingWitnessError(CongestPathsError):
    """A result lacks the witnesses needed to construct paths or cycles."""


class VerificationFailed(CongestPathsError):
    """An output disagrees with its oracle."""

    exit_code = 1
