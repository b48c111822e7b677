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

"""The result of a replacement paths computation."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Literal, NamedTuple

from ..congest.simulator import SimReport
from ..graph.graph import PathSpec

type Weight = int | Fraction
type WitnessKind = Literal["detour", "vertex", "edge"]


class Witness(NamedTuple):
    """How a replacement path leaves and rejoins the input path.

    A detour witness names the deviation vertex v_a and the merge vertex v_b.
    A vertex witness names u with the path P_s(s,u)∘P_t(u,t), an edge witness
    names (u, v) with the path P_s(s,u)∘(u,v)∘P_t(v,t).
    """

    kind: WitnessKind
    first: int
    second: int | None = None


@dataclass(frozen=True, slots=True)
class RPathsResult:  # pylint: disable=too-many-instance-attributes
    """The replacement path weight of every edge of the input path.

    weights[j] belongs to the edge (v_j, v_j+1) and is inf if there is no
    replacement path. The trees hold per node state kept for the
    construction of the paths.
    """

    algorithm: str
    path: PathSpec
    weights: tuple[Weight, ...]
    witnesses: tuple[Witness | None, ...]
    inf: int
    report: SimReport | None = None
    h_rep: int | None = None
    trees: Mapping[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        """Check that there is one entry per edge."""
        if not len(self.weights) == len(self.witnesses) == self.path.h_st:
            raise ValueError(
                f"Expected {self.path.h_st!r} weights and witnesses, "
                f"got {len(self.weights)!r} and {len(self.witnesses)!r}"
            )

    @property
    def sisp2(self) -> Weight:
        """The weight of the second simple shortest path."""
        return sisp2(self)

    def finite(self, index: int) -> bool:
        """Whether the edge with the index has a replacement path."""
        return self.weights[index] < self.inf


def sisp2(result: RPathsResult) -> Weight:
    """Get the minimum over all replacement path weights, or inf."""
    return min(result.weights, default=result.inf)
