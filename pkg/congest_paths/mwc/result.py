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

"""The result of a minimum weight cycle computation."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Literal, NamedTuple

from ..congest.simulator import SimReport

type Weight = int | Fraction
type CycleKind = Literal["arc", "triple", "non-tree", "two-edge"]


class CycleWitness(NamedTuple):
    """The data a cycle can be constructed from.

    arc:      the path through → first followed by the arc (first, through)
    triple:   the paths through → first and through → second joined by the
              edge (first, second)
    non-tree: the tree paths of the source through to first and second
              joined by the edge (first, second)
    two-edge: like non-tree, but first and second are joined via middle
    """

    kind: CycleKind
    through: int
    first: int
    second: int | None = None
    middle: int | None = None


@dataclass(frozen=True, slots=True)
class CycleResult:  # pylint: disable=too-many-instance-attributes
    """The minimum cycle weight, and the shortest cycle through every node.

    ansc and witnesses are only set by the exact algorithms, weight is inf
    if the graph has no cycle.
    """

    algorithm: str
    weight: Weight
    witness: CycleWitness | None
    inf: int
    ansc: tuple[Weight, ...] | None = None
    witnesses: tuple[CycleWitness | None, ...] | None = None
    h_cyc: int | None = None
    ratio: Fraction | None = None
    level: int | None = None
    scaled_length: int | None = None
    report: SimReport | None = None
    tables: Mapping[str, Any] = field(default_factory=dict, compare=False)

    @property
    def approximate(self) -> bool:
        """Whether the weight is only guaranteed up to the ratio."""
        return self.ratio is not None

    @property
    def acyclic(self) -> bool:
        """Whether no cycle was found."""
        return self.weight >= self.inf
