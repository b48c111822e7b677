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

"""Graph sources given on the command line.

A source is one of

    file:PATH
    random:n=64,p=0.1,seed=7[,directed=sure][,weighted=sure][,w=100][,hst=8]
    gadget:family=dir-mwc,k=4[,seed=3][,intersect=sure][,q=5][,heavy=2]
    detour:n=27[,hst=1][,w=3]
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Final, TypeVar, cast

import regex

from ..errors import UsageError
from ..graph.graph import Graph, PathSpec, detour_graph, random_graph
from ..graph.graph_file import load_graph, load_path
from ..graph.oracle import dijkstra
from ..utils.utils import seeded_random, str_to_bool
from ..verify.gadgets import FAMILIES, Family, Gadget, gen_gadget, random_spec

LOGGER: Final = logging.getLogger(__name__)

SOURCE_PATTERN: Final = regex.compile(
    r"(?P<kind>file|random|gadget|detour):(?P<rest>.+)"
)
PARAM_PATTERN: Final = regex.compile(r"(?P<key>[a-z_]+)=(?P<value>[^,=]+)")
PATH_SOURCES: Final[int] = 64

V = TypeVar("V")


@dataclass(frozen=True, slots=True)
class Instance:
    """A graph with the s-t path to run replacement paths on."""

    source: str
    graph: Graph
    path: PathSpec | None = None
    gadget: Gadget | None = None


def parse_params(text: str, allowed: frozenset[str]) -> dict[str, str]:
    """Parse comma separated key=value pairs."""
    params: dict[str, str] = {}
    for part in text.split(","):
        if not (match := PARAM_PATTERN.fullmatch(part.strip())):
            raise UsageError(f"Malformed parameter {part!r} in {text!r}")
        if match["key"] not in allowed:
            raise UsageError(
                f"Unknown parameter {match['key']!r}, "
                f"expected one of {sorted(allowed)!r}"
            )
        params[match["key"]] = match["value"]
    return params


def _param(
    params: Mapping[str, str],
    key: str,
    conv: Callable[[str], V],
    default: V | None = None,
) -> V:
    if key not in params:
        if default is None:
            raise UsageError(f"The parameter {key!r} is required")
        return default
    try:
        return conv(params[key])
    except ValueError as exc:
        raise UsageError(f"Invalid value for {key!r}: {params[key]!r}") from exc


def random_path(
    graph: Graph, seed: int, hops: int | None = None
) -> PathSpec | None:
    """Pick a shortest s-t path with about the given number of edges.

    Without a hop count the path has at least two edges if possible. None is
    returned if no vertex reaches another one.
    """
    rng = seeded_random("path", seed)
    sources = list(range(graph.n))
    rng.shuffle(sources)
    target = hops or 2
    best: tuple[int, float, int, int] | None = None
    for s in sources[:PATH_SOURCES]:  # pylint: disable=invalid-name
        tree = dijkstra(graph, s)
        for t in range(graph.n):  # pylint: disable=invalid-name
            if t == s or tree.dist[t] >= graph.inf:
                continue
            score = (
                abs(tree.hops[t] - target) + (tree.hops[t] < 2) * graph.n,
                rng.random(),
                s,
                t,
            )
            best = score if best is None else min(best, score)
    if best is None:
        return None
    s, t = best[2], best[3]  # pylint: disable=invalid-name
    tree = dijkstra(graph, s)
    vertices = [t]
    while (parent := tree.parent[vertices[-1]]) is not None:
        vertices.append(parent)
    return PathSpec.from_vertices(graph, vertices[::-1])


def _random_instance(source: str, rest: str) -> Instance:
    params = parse_params(
        rest,
        frozenset({"n", "p", "seed", "directed", "weighted", "w", "hst"}),
    )
    weighted = _param(params, "weighted", str_to_bool, False)
    seed = _param(params, "seed", int, 0)
    try:
        graph = random_graph(
            _param(params, "n", int),
            _param(params, "p", float),
            directed=_param(params, "directed", str_to_bool, False),
            weighted=weighted,
            max_weight=_param(params, "w", int, 100 if weighted else 1),
            seed=seed,
        )
    except ValueError as exc:
        raise UsageError(f"Invalid random graph {source!r}: {exc}") from exc
    hops = int(params["hst"]) if "hst" in params else None
    return Instance(source, graph, random_path(graph, seed, hops))


def _gadget_instance(source: str, rest: str) -> Instance:
    params = parse_params(
        rest,
        frozenset(
            {
                "family",
                "k",
                "seed",
                "intersect",
                "q",
                "heavy",
                "sink",
                "shortcut",
            }
        ),
    )
    family = _param(params, "family", str)
    if family not in FAMILIES:
        raise UsageError(
            f"Unknown gadget family {family!r}, expected one of {FAMILIES!r}"
        )
    gadget = gen_gadget(
        random_spec(
            cast(Family, family),
            _param(params, "k", int),
            seed=_param(params, "seed", int, 0),
            intersect=(
                str_to_bool(params["intersect"])
                if "intersect" in params
                else None
            ),
            q=_param(params, "q", int, 4),
            heavy=_param(params, "heavy", int, 2),
            sink=_param(params, "sink", str_to_bool, True),
            shortcut=_param(params, "shortcut", str_to_bool, True),
        )
    )
    return Instance(source, gadget.graph, gadget.path, gadget)


def _detour_instance(source: str, rest: str) -> Instance:
    params = parse_params(rest, frozenset({"n", "hst", "w"}))
    try:
        graph, path = detour_graph(
            _param(params, "n", int),
            _param(params, "hst", int, 1),
            int(params["w"]) if "w" in params else None,
        )
    except ValueError as exc:
        raise UsageError(f"Invalid detour graph {source!r}: {exc}") from exc
    return Instance(source, graph, path)


def load_instance(source: str, path_file: Path | None = None) -> Instance:
    """Load or generate the graph described by the source."""
    if not (found := SOURCE_PATTERN.fullmatch(source)):
        raise UsageError(
            f"Unknown graph source {source!r}, "
            f"expected file:PATH, random:..., gadget:... or detour:..."
        )
    match found["kind"]:
        case "file":
            try:
                graph = load_graph(Path(found["rest"]))
            except OSError as exc:
                raise UsageError(f"Cannot read {source!r}: {exc}") from exc
            instance = Instance(source, graph)
        case "random":
            instance = _random_instance(source, found["rest"])
        case "detour":
            instance = _detour_instance(source, found["rest"])
        case _:
            instance = _gadget_instance(source, found["rest"])
    if path_file is not None:
        instance = Instance(
            source,
            instance.graph,
            load_path(path_file, instance.graph),
            instance.gadget,
        )
    LOGGER.debug(
        "Loaded %s with n=%d and m=%d",
        source,
        instance.graph.n,
        instance.graph.m,
    )
    return instance
