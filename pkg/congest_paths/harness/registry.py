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

"""The registered algorithms and how to run them."""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Final, Literal

from ..congest.simulator import SimConfig
from ..errors import UsageError
from ..graph.graph import Graph, PathSpec
from ..mwc.approx import girth_approx, mwc_undirw_approx
from ..mwc.exact import ansc, mwc_directed, mwc_undirected
from ..mwc.result import CycleResult
from ..rpaths.directed import (
    rpaths_dirunw_sampling,
    rpaths_dirw_apsp,
    rpaths_dirw_approx,
    rpaths_iterated_sssp,
)
from ..rpaths.result import RPathsResult
from ..rpaths.undirected import rpaths_undirected
from ..utils.utils import get_close_matches

type Problem = Literal["rpaths", "cycles"]
type Result = RPathsResult | CycleResult


@dataclass(frozen=True, slots=True)
class Algorithm:  # pylint: disable=too-many-instance-attributes
    """An algorithm with the graph class it needs."""

    name: str
    problem: Problem
    function: Callable[..., Any]
    summary: str
    directed: bool | None = None
    weighted: bool | None = None
    eps: bool = False
    approximate: bool = False
    sampled: bool = False

    def run(
        self,
        graph: Graph,
        path: PathSpec | None = None,
        *,
        eps: Fraction | None = None,
        config: SimConfig | None = None,
        prob: float | None = None,
    ) -> Result:
        """Run the algorithm in a new session.

        The sampling probability can only be set for sampling algorithms.
        """
        graph.require(self.name, directed=self.directed, weighted=self.weighted)
        args: list[Any] = [graph]
        if self.problem == "rpaths":
            if path is None:
                raise UsageError(f"{self.name!r} needs an s-t path")
            args.append(path)
        if self.eps:
            if eps is None:
                raise UsageError(f"{self.name!r} needs eps")
            args.append(eps)
        kwargs: dict[str, Any] = {"config": config}
        if prob is not None:
            if not self.sampled:
                raise UsageError(f"{self.name!r} does not sample vertices")
            kwargs["prob"] = prob
        result: Result = self.function(*args, **kwargs)
        return result

    def ratio(self, eps: Fraction | None) -> Fraction | None:
        """The factor by which the weights of the result may be too large."""
        if not self.approximate:
            return None
        if self.problem == "rpaths":
            assert eps is not None  # nosec: B101
            return 1 + eps
        return Fraction(2) if eps is None else 2 + 2 * eps


ALGORITHMS: Final[Mapping[str, Algorithm]] = {
    algorithm.name: algorithm
    for algorithm in (
        Algorithm(
            "rp-dirw-apsp",
            "rpaths",
            rpaths_dirw_apsp,
            "replacement paths via shortest paths in a reduction graph",
            directed=True,
        ),
        Algorithm(
            "rp-iter-sssp",
            "rpaths",
            rpaths_iterated_sssp,
            "replacement paths with one SSSP per path edge",
            directed=True,
        ),
        Algorithm(
            "rp-dirunw-sample",
            "rpaths",
            rpaths_dirunw_sampling,
            "unweighted replacement paths via a sampled skeleton",
            directed=True,
            weighted=False,
            sampled=True,
        ),
        Algorithm(
            "rp-dirw-approx",
            "rpaths",
            rpaths_dirw_approx,
            "(1+eps)-approximate weighted replacement paths",
            directed=True,
            eps=True,
            approximate=True,
            sampled=True,
        ),
        Algorithm(
            "rp-undir",
            "rpaths",
            rpaths_undirected,
            "undirected replacement paths from two shortest path trees",
            directed=False,
        ),
        Algorithm(
            "mwc-dir",
            "cycles",
            mwc_directed,
            "directed minimum weight cycle and shortest cycle per node",
            directed=True,
        ),
        Algorithm(
            "mwc-undir",
            "cycles",
            mwc_undirected,
            "undirected minimum weight cycle and shortest cycle per node",
            directed=False,
        ),
        Algorithm(
            "ansc",
            "cycles",
            ansc,
            "shortest cycle through every node of any graph",
        ),
        Algorithm(
            "girth-approx",
            "cycles",
            girth_approx,
            "(2-1/g)-approximate girth of undirected unweighted graphs",
            directed=False,
            weighted=False,
            approximate=True,
            sampled=True,
        ),
        Algorithm(
            "mwc-wapprox",
            "cycles",
            mwc_undirw_approx,
            "(2+2eps)-approximate undirected minimum weight cycle",
            directed=False,
            weighted=True,
            eps=True,
            approximate=True,
            sampled=True,
        ),
    )
}


def get_algorithm(name: str) -> Algorithm:
    """Look up an algorithm, suggesting similar ids for unknown ones."""
    if (algorithm := ALGORITHMS.get(name)) is not None:
        return algorithm
    suggestions = get_close_matches(name, ALGORITHMS)
    hint = f"; did you mean {', '.join(suggestions)}?" if suggestions else ""
    raise UsageError(f"Unknown algorithm {name!r}{hint}")
