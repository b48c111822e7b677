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

"""The gadget graphs of the lower bounds with their weight dichotomies.

The set disjointness families take two k²-bit strings; bit (i, j) with
1 ≤ i, j ≤ k is at position (i - 1)·k + j. The optimum value of the
gadget tells whether the strings intersect. The other families embed a
base graph and encode a property of it.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Final, Literal, get_args

from ..errors import InvalidGadgetSpecError, VerificationFailed
from ..graph.graph import Graph, PathSpec, random_graph
from ..graph.oracle import bfs, dijkstra, shortest_path_oracle
from ..utils.utils import seeded_random
from .oracles import oracle_mwc, oracle_sisp2

LOGGER: Final = logging.getLogger(__name__)

type Family = Literal[
    "dirw-rpaths",
    "dirunw-rpaths",
    "undir-rpaths",
    "dir-mwc",
    "undirw-mwc",
    "qcycle",
]
type Relation = Literal["<=", ">=", "==", "finite", "infinite"]

FAMILIES: Final[tuple[Family, ...]] = get_args(Family.__value__)
STRING_FAMILIES: Final[frozenset[str]] = frozenset(
    {"dirw-rpaths", "dir-mwc", "undirw-mwc", "qcycle"}
)
BASE_FAMILIES: Final[frozenset[str]] = frozenset(
    {"dirunw-rpaths", "undir-rpaths"}
)


@dataclass(frozen=True, slots=True)
class GadgetSpec:  # pylint: disable=too-many-instance-attributes
    """Everything a gadget graph is built from.

    The string families use k, s_a and s_b; the base families use the base
    graph, the subgraph H given by its edges, and s and t.
    """

    family: Family
    k: int
    s_a: tuple[bool, ...] = ()
    s_b: tuple[bool, ...] = ()
    q: int = 4
    heavy: int = 2
    sink: bool = False
    shortcut: bool = True
    base: Graph | None = field(default=None, repr=False)
    subgraph: frozenset[tuple[int, int]] = frozenset()
    s: int = 0  # pylint: disable=invalid-name
    t: int = 1  # pylint: disable=invalid-name

    def __post_init__(self) -> None:
        """Check the invariants of the family."""
        if self.family not in FAMILIES:
            raise InvalidGadgetSpecError(f"Unknown family {self.family!r}")
        if self.k < 1:
            raise InvalidGadgetSpecError(f"k must be positive: {self.k!r}")
        if self.family in STRING_FAMILIES:
            if not len(self.s_a) == len(self.s_b) == self.k**2:
                raise InvalidGadgetSpecError(
                    f"Expected strings of {self.k**2} bits, "
                    f"got {len(self.s_a)!r} and {len(self.s_b)!r}"
                )
        if self.family == "qcycle" and self.q < 4:
            raise InvalidGadgetSpecError(f"q must be at least 4: {self.q!r}")
        if self.family == "undirw-mwc" and self.heavy < 2:
            raise InvalidGadgetSpecError(
                f"The heavy weight must be at least 2: {self.heavy!r}"
            )
        if self.family in BASE_FAMILIES:
            self._check_base()

    def _check_base(self) -> None:
        base = self.base
        if base is None or base.directed or base.n != self.k:
            raise InvalidGadgetSpecError(
                f"{self.family!r} needs an undirected base graph with k "
                f"vertices"
            )
        if self.family == "dirunw-rpaths" and base.weighted:
            raise InvalidGadgetSpecError("The base graph must be unweighted")
        if not (0 <= self.s < base.n and 0 <= self.t < base.n) or (
            self.s == self.t
        ):
            raise InvalidGadgetSpecError(
                f"Invalid terminals s={self.s!r} t={self.t!r}"
            )
        if missing := {
            (u, v) for u, v in self.subgraph if not base.has_arc(u, v)
        }:
            raise InvalidGadgetSpecError(
                f"The subgraph has edges outside the base: {sorted(missing)!r}"
            )

    def bit(self, i: int, j: int) -> int:
        """The index of bit (i, j) in the strings."""
        if not (1 <= i <= self.k and 1 <= j <= self.k):
            raise InvalidGadgetSpecError(f"No bit {(i, j)!r} for k={self.k}")
        return (i - 1) * self.k + j - 1

    @property
    def intersecting(self) -> bool:
        """Whether some bit is set in both strings."""
        return any(a and b for a, b in zip(self.s_a, self.s_b))

    @classmethod
    def from_bits(
        cls,
        family: Family,
        k: int,
        bits_a: Iterable[tuple[int, int]],
        bits_b: Iterable[tuple[int, int]],
        **kwargs: object,
    ) -> GadgetSpec:
        """Build the strings from the (i, j) pairs that are set."""
        s_a, s_b = [False] * k**2, [False] * k**2
        for string, bits in ((s_a, bits_a), (s_b, bits_b)):
            for i, j in bits:
                if not (1 <= i <= k and 1 <= j <= k):
                    raise InvalidGadgetSpecError(f"No bit {(i, j)!r}")
                string[(i - 1) * k + j - 1] = True
        return cls(  # type: ignore[arg-type]
            family, k, tuple(s_a), tuple(s_b), **kwargs
        )


def random_strings(
    k: int, rng: random.Random, intersect: bool | None = None
) -> tuple[tuple[bool, ...], tuple[bool, ...]]:
    """Draw two k²-bit strings, forced to intersect or to be disjoint."""
    s_a = [rng.random() < 0.5 for _ in range(k**2)]
    s_b = [rng.random() < 0.5 for _ in range(k**2)]
    if intersect and not any(a and b for a, b in zip(s_a, s_b)):
        position = rng.randrange(k**2)
        s_a[position] = s_b[position] = True
    elif intersect is False:
        s_b = [b and not a for a, b in zip(s_a, s_b)]
    return tuple(s_a), tuple(s_b)


def random_spec(  # pylint: disable=too-many-arguments
    family: Family,
    k: int,
    *,
    seed: int = 0,
    intersect: bool | None = None,
    q: int = 4,
    heavy: int = 2,
    sink: bool = True,
    shortcut: bool = True,
) -> GadgetSpec:
    """Draw a gadget spec deterministically from the seed.

    For the base families k is the size of a random base graph. With
    intersect set, H connects s and t in dirunw-rpaths; without, s is
    isolated in H.
    """
    rng = seeded_random("gadget", family, k, seed, intersect)
    if family in STRING_FAMILIES:
        s_a, s_b = random_strings(k, rng, intersect)
        return GadgetSpec(family, k, s_a, s_b, q=q, heavy=heavy, sink=sink)
    if k < 2:
        raise InvalidGadgetSpecError(f"The base graph needs k >= 2: {k!r}")
    base = random_graph(
        k,
        min(1.0, 3 / k),
        weighted=family == "undir-rpaths",
        max_weight=8 if family == "undir-rpaths" else 1,
        seed=rng.randrange(1 << 32),
    )
    s, t = 0, k - 1  # pylint: disable=invalid-name
    subgraph = {(u, v) for u, v, _ in base.edges if rng.random() < 0.5}
    if intersect:
        _, walk = shortest_path_oracle(base, s, t)
        subgraph |= {(min(u, v), max(u, v)) for u, v in zip(walk, walk[1:])}
    elif intersect is False:
        subgraph = {edge for edge in subgraph if s not in edge}
    return GadgetSpec(
        family,
        k,
        base=base,
        subgraph=frozenset(subgraph),
        s=s,
        t=t,
        shortcut=shortcut,
    )


@dataclass(frozen=True, slots=True)
class Gadget:
    """A gadget graph with the names of its vertices."""

    spec: GadgetSpec
    graph: Graph
    path: PathSpec | None
    names: Mapping[str, int]

    def vertex(self, name: str) -> int:
        """Get the id of the named vertex, e.g. l1, r'2 or p0."""
        return self.names[name]


class _Builder:
    """Collect named vertices and edges."""

    __slots__ = ("edges", "names")

    def __init__(self) -> None:
        self.names: dict[str, int] = {}
        self.edges: list[tuple[int, int, int]] = []

    def add(self, *names: str) -> None:
        for name in names:
            self.names.setdefault(name, len(self.names))

    def edge(self, u: str, v: str, weight: int = 1) -> None:
        self.edges.append((self.names[u], self.names[v], weight))

    def sink(self, weight: int = 1) -> None:
        """Join every vertex to a new sink vertex."""
        others = list(self.names)
        self.add("sink")
        for name in others:
            self.edge(name, "sink", weight)

    def build(self, *, directed: bool, weighted: bool) -> Graph:
        return Graph.build(
            len(self.names), self.edges, directed=directed, weighted=weighted
        )


def _bits(
    spec: GadgetSpec, string: tuple[bool, ...]
) -> list[tuple[int, int]]:
    k = spec.k
    return [
        (i, j)
        for i in range(1, k + 1)
        for j in range(1, k + 1)
        if string[spec.bit(i, j)]
    ]


def _dirw_rpaths(spec: GadgetSpec, builder: _Builder) -> list[str]:
    k = spec.k
    builder.add("p0")
    for i in range(1, k + 1):
        builder.add(f"l{i}", f"l'{i}", f"r{i}", f"r'{i}", f"lbar{i}", f"p{i}")
    for i in range(1, k + 1):
        builder.edge(f"l{i}", f"r{i}", k)
        builder.edge(f"r'{i}", f"l'{i}", k)
        builder.edge(f"p{i - 1}", f"p{i}", 1)
        builder.edge(f"p{i - 1}", f"l{i}", 4 * k * (k - i + 1))
        builder.edge(f"lbar{i}", f"p{i}", 4 * k * i)
    for i, j in _bits(spec, spec.s_a):
        builder.edge(f"l'{j}", f"lbar{i}", k)
    for i, j in _bits(spec, spec.s_b):
        builder.edge(f"r{i}", f"r'{j}", k)
    return [f"p{i}" for i in range(k + 1)]


def _dir_mwc(spec: GadgetSpec, builder: _Builder) -> None:
    k, chain = spec.k, spec.q - 3 if spec.family == "qcycle" else 1
    for i in range(1, k + 1):
        if chain == 1:
            builder.add(f"l{i}")
        else:
            builder.add(*(f"l{i}.{m}" for m in range(1, chain + 1)))
        builder.add(f"r{i}", f"r'{i}", f"l'{i}")

    def entry(i: int) -> str:
        return f"l{i}" if chain == 1 else f"l{i}.1"

    def leave(i: int) -> str:
        return f"l{i}" if chain == 1 else f"l{i}.{chain}"

    for i in range(1, k + 1):
        for m in range(1, chain):
            builder.edge(f"l{i}.{m}", f"l{i}.{m + 1}")
        builder.edge(leave(i), f"r{i}")
        builder.edge(f"r'{i}", f"l'{i}")
    for i, j in _bits(spec, spec.s_a):
        builder.edge(f"l'{j}", entry(i))
    for i, j in _bits(spec, spec.s_b):
        builder.edge(f"r{i}", f"r'{j}")


def _undirw_mwc(spec: GadgetSpec, builder: _Builder) -> None:
    k = spec.k
    for i in range(1, k + 1):
        builder.add(f"l{i}", f"r{i}", f"l'{i}", f"r'{i}")
    for i in range(1, k + 1):
        builder.edge(f"l{i}", f"r{i}")
        builder.edge(f"l'{i}", f"r'{i}")
    for i, j in _bits(spec, spec.s_a):
        builder.edge(f"l{i}", f"l'{j}", spec.heavy)
    for i, j in _bits(spec, spec.s_b):
        builder.edge(f"r{i}", f"r'{j}", spec.heavy)


def _dirunw_rpaths(spec: GadgetSpec, builder: _Builder) -> list[str] | None:
    assert spec.base is not None  # nosec: B101
    base = spec.base
    builder.add(*(f"g{v}" for v in range(base.n)))
    builder.add(*(f"h{v}" for v in range(base.n)))
    builder.add("s'", "t'")
    for u, v, _ in base.edges:
        builder.edge(f"g{u}", f"g{v}")
        builder.edge(f"g{v}", f"g{u}")
    for u, v in sorted(spec.subgraph):
        builder.edge(f"h{u}", f"h{v}")
        builder.edge(f"h{v}", f"h{u}")
    for v in range(base.n):
        builder.edge(f"g{v}", f"h{v}")
    builder.edge("s'", f"h{spec.s}")
    builder.edge(f"h{spec.t}", "t'")
    if not spec.shortcut:
        return None
    builder.edge("s'", "t'")
    return ["s'", "t'"]


def _undir_rpaths(spec: GadgetSpec, builder: _Builder) -> list[str]:
    assert spec.base is not None  # nosec: B101
    base = spec.base
    builder.add(*(f"v{v}" for v in range(base.n)))
    builder.add("s'", "t'")
    for u, v, weight in base.edges:
        builder.edge(f"v{u}", f"v{v}", weight)
    builder.edge("s'", f"v{spec.s}")
    builder.edge(f"v{spec.t}", "t'")
    builder.edge("s'", "t'")
    return ["s'", "t'"]


def gen_gadget(spec: GadgetSpec) -> Gadget:
    """Build the gadget graph, and its path for the replacement path families.

    A disconnected gadget raises DisconnectedGraphError; the sink keeps
    gadgets of sparse strings connected.
    """
    builder = _Builder()
    path: list[str] | None = None
    directed, weighted = True, False
    match spec.family:
        case "dirw-rpaths":
            path, weighted = _dirw_rpaths(spec, builder), True
        case "dir-mwc" | "qcycle":
            _dir_mwc(spec, builder)
        case "undirw-mwc":
            _undirw_mwc(spec, builder)
            directed, weighted = False, True
        case "dirunw-rpaths":
            path = _dirunw_rpaths(spec, builder)
        case "undir-rpaths":
            path = _undir_rpaths(spec, builder)
            assert spec.base is not None  # nosec: B101
            directed, weighted = False, spec.base.weighted
    if spec.sink and spec.family in STRING_FAMILIES:
        builder.sink(1 if directed else 2 * spec.heavy)
    graph = builder.build(directed=directed, weighted=weighted)
    LOGGER.debug(
        "Gadget %s with k=%d has %d vertices and %d edges",
        spec.family,
        spec.k,
        graph.n,
        graph.m,
    )
    return Gadget(
        spec=spec,
        graph=graph,
        path=(
            None
            if path is None
            else PathSpec.from_vertices(
                graph, [builder.names[name] for name in path]
            )
        ),
        names=builder.names,
    )


@dataclass(frozen=True, slots=True)
class Verdict:
    """The measured value of a gadget and the side it has to be on."""

    family: Family
    side: str
    measured: int
    relation: Relation
    bound: int | None
    holds: bool


def _h_connected(spec: GadgetSpec) -> bool:
    assert spec.base is not None  # nosec: B101
    h = Graph.build(
        spec.k,
        spec.subgraph,
        directed=False,
        weighted=False,
        check_connected=False,
    )
    return bfs(h, spec.s)[spec.t] < h.inf


def _compare(
    measured: int, relation: Relation, bound: int | None, inf: int
) -> bool:
    match relation:
        case "<=":
            return bound is not None and measured <= bound
        case ">=":
            return bound is not None and measured >= bound
        case "==":
            return measured == bound
        case "finite":
            return measured < inf
    return measured >= inf


def _predict(  # pylint: disable=too-many-return-statements
    spec: GadgetSpec, gadget: Gadget
) -> tuple[str, int, Relation, int | None]:
    """Measure the gadget and predict (side, measured, relation, bound)."""
    k, graph = spec.k, gadget.graph
    side = "intersecting" if spec.intersecting else "disjoint"
    match spec.family:
        case "dirw-rpaths":
            assert gadget.path is not None  # nosec: B101
            measured = oracle_sisp2(graph, gadget.path)
            if spec.intersecting:
                return side, measured, "<=", 4 * k**2 + 9 * k - 1
            return side, measured, ">=", 4 * k**2 + 12 * k
        case "dir-mwc" | "qcycle":
            length = 4 if spec.family == "dir-mwc" else spec.q
            measured = oracle_mwc(graph)
            if spec.intersecting:
                return side, measured, "==", length
            return side, measured, ">=", 2 * length
        case "undirw-mwc":
            heavy = spec.heavy
            measured = oracle_mwc(graph)
            if spec.intersecting:
                return side, measured, "==", 2 + 2 * heavy
            return side, measured, ">=", min(4 * heavy, 3 * heavy + 3)
        case "dirunw-rpaths":
            connected = _h_connected(spec)
            if gadget.path is None:
                measured = bfs(graph, gadget.vertex("s'"))[gadget.vertex("t'")]
                side = "reachable" if connected else "unreachable"
            else:
                measured = oracle_sisp2(graph, gadget.path)
                side = "connected" if connected else "disconnected"
            return side, measured, "finite" if connected else "infinite", None
    assert spec.base is not None  # nosec: B101
    measured = oracle_sisp2(graph, gadget.path)  # type: ignore[arg-type]
    expected = 2 + dijkstra(spec.base, spec.s).dist[spec.t]
    return "exact", measured, "==", expected


def check_dichotomy(spec: GadgetSpec, gadget: Gadget | None = None) -> Verdict:
    """Measure the gadget with the oracle and check its dichotomy."""
    gadget = gadget or gen_gadget(spec)
    side, measured, relation, bound = _predict(spec, gadget)
    verdict = Verdict(
        family=spec.family,
        side=side,
        measured=measured,
        relation=relation,
        bound=bound,
        holds=_compare(measured, relation, bound, gadget.graph.inf),
    )
    if not verdict.holds:
        raise VerificationFailed(
            f"Dichotomy of {spec.family} violated: measured {measured!r}, "
            f"expected {relation} {bound!r} ({side}) for {spec!r}"
        )
    return verdict
