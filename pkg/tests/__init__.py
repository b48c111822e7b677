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

"""Utilities used by the tests of congest-paths."""

from __future__ import annotations

import sys
from os.path import abspath, dirname

# add parent dir to sys.path
# this makes importing congest_paths possible
DIR = abspath(dirname(__file__))
PARENT_DIR = abspath(dirname(DIR))
sys.path.append(PARENT_DIR)


from collections.abc import Iterator  # noqa: E402
from pathlib import Path  # noqa: E402
from typing import Final  # noqa: E402

from congest_paths.graph.graph import (  # noqa: E402
    Graph,
    PathSpec,
    random_graph,
)
from congest_paths.graph.oracle import shortest_path_oracle  # noqa: E402
from congest_paths.utils.better_config_parser import (  # noqa: E402
    BetterConfigParser,
)

CONFIG_PATH: Final = Path(DIR) / "config.ini"


def config() -> BetterConfigParser:
    """Load the config used by the tests."""
    return BetterConfigParser.from_path(CONFIG_PATH)


def cycle_graph(
    n: int, *, directed: bool = False, weights: tuple[int, ...] = ()
) -> Graph:
    """Build the cycle 0 → 1 → … → n-1 → 0, optionally weighted."""
    edges = [(u, (u + 1) % n, weights[u] if weights else 1) for u in range(n)]
    return Graph.build(n, edges, directed=directed, weighted=bool(weights))


def path_graph(n: int, *, directed: bool = False) -> Graph:
    """Build the unweighted path 0 - 1 - … - n-1."""
    return Graph.build(
        n,
        [(u, u + 1) for u in range(n - 1)],
        directed=directed,
        weighted=False,
    )


def ladder() -> Graph:
    """Two parallel unweighted paths 0-1-2-3 and 4-5-6-7 with rungs."""
    edges = [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)]
    edges += [(0, 4), (1, 5), (2, 6), (3, 7)]
    return Graph.build(8, edges, directed=False, weighted=False)


def shortest_path(graph: Graph, s: int, t: int) -> PathSpec:
    """The canonical shortest s-t path as a path spec."""
    _, vertices = shortest_path_oracle(graph, s, t)
    return PathSpec.from_vertices(graph, vertices)


def random_instances(
    count: int,
    n: int,
    *,
    directed: bool,
    weighted: bool,
    p: float = 0.3,
    max_weight: int = 8,
) -> Iterator[tuple[Graph, PathSpec]]:
    """Yield random graphs with a path of at least two edges, if possible."""
    for seed in range(count):
        graph = random_graph(
            n,
            p,
            directed=directed,
            weighted=weighted,
            max_weight=max_weight if weighted else 1,
            seed=seed,
        )
        for t in range(n - 1, 0, -1):
            weight, vertices = shortest_path_oracle(graph, 0, t)
            if weight < graph.inf and len(vertices) > 2:
                yield graph, PathSpec.from_vertices(graph, vertices)
                break
