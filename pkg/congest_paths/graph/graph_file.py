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

"""Read and write graphs and paths in the edge list format."""

from __future__ import annotations

import logging
from collections.abc import Iterable
from pathlib import Path
from typing import Final

import regex
from typed_stream import Stream

from ..errors import (
    EdgeCountMismatchError,
    InvalidPathError,
    MalformedEdgeError,
    MalformedHeaderError,
)
from .graph import Graph, PathSpec

LOGGER: Final = logging.getLogger(__name__)

HEADER_PATTERN: Final = regex.compile(
    r"(?P<n>\d+)\s+(?P<m>\d+)\s+"
    r"(?P<directed>directed|undirected)\s+"
    r"(?P<weighted>weighted|unweighted)"
)
EDGE_PATTERN: Final = regex.compile(
    r"(?P<u>-?\d+)\s+(?P<v>-?\d+)(?:\s+(?P<w>-?\d+))?"
)


def _content_lines(text: str) -> Iterable[tuple[int, str]]:
    """Yield the numbered lines that are neither empty nor comments."""
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if line:
            yield number, line


def dump_graph(graph: Graph) -> str:
    """Serialize a graph in the canonical form with sorted edges."""
    header = (
        f"{graph.n} {graph.m} "
        f"{'directed' if graph.directed else 'undirected'} "
        f"{'weighted' if graph.weighted else 'unweighted'}"
    )
    lines = [header]
    for u, v, w in graph.edges:
        lines.append(f"{u} {v} {w}" if graph.weighted else f"{u} {v}")
    return "\n".join(lines) + "\n"


def dump_path(path: PathSpec) -> str:
    """Serialize a path as one line of vertex ids."""
    return " ".join(map(str, path.vertices)) + "\n"


def load_graph(path: Path) -> Graph:
    """Load and validate a graph file."""
    LOGGER.debug("Loading graph from %s", path)
    return parse_graph(path.read_text(encoding="UTF-8"))


def load_path(path: Path, graph: Graph) -> PathSpec:
    """Load a path file and check it against the graph."""
    return parse_path(path.read_text(encoding="UTF-8"), graph)


def parse_graph(text: str) -> Graph:
    """Parse a graph in the edge list format."""
    lines = iter(_content_lines(text))
    try:
        number, header = next(lines)
    except StopIteration:
        raise MalformedHeaderError("The graph file is empty") from None
    if not (match := HEADER_PATTERN.fullmatch(header)):
        raise MalformedHeaderError(
            f"Malformed header in line {number!r}: {header!r}"
        )
    n, m = int(match["n"]), int(match["m"])
    weighted = match["weighted"] == "weighted"
    edges: list[tuple[int, int, int]] = []
    for number, line in lines:
        edge = EDGE_PATTERN.fullmatch(line)
        if not edge or (edge["w"] is None) == weighted:
            raise MalformedEdgeError(
                f"Malformed edge in line {number!r}: {line!r}"
            )
        edges.append((int(edge["u"]), int(edge["v"]), int(edge["w"] or 1)))
    if len(edges) != m:
        raise EdgeCountMismatchError(
            f"The header announces {m!r} edges, but {len(edges)!r} were given"
        )
    return Graph.build(
        n, edges, directed=match["directed"] == "directed", weighted=weighted
    )


def parse_path(text: str, graph: Graph) -> PathSpec:
    """Parse a line of vertex ids into a validated shortest path."""
    tokens = (
        Stream(_content_lines(text))
        .flat_map(lambda line: line[1].split())
        .collect(list)
    )
    if not all(regex.fullmatch(r"\d+", token) for token in tokens):
        raise InvalidPathError(f"Malformed path: {tokens!r}")
    return PathSpec.from_vertices(graph, [int(token) for token in tokens])


def save_graph(graph: Graph, path: Path) -> None:
    """Write a graph in the canonical form."""
    path.write_text(dump_graph(graph), encoding="UTF-8")
    LOGGER.debug("Saved graph with n=%d m=%d to %s", graph.n, graph.m, path)
