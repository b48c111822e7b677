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

"""The tests for the sequential oracles and validators."""

from __future__ import annotations

from fractions import Fraction

import pytest

from congest_paths.errors import (
    MissingWitnessError,
    UsageError,
    VerificationFailed,
)
from congest_paths.graph.graph import Graph, PathSpec, random_graph
from congest_paths.mwc.exact import mwc_undirected
from congest_paths.mwc.result import CycleResult
from congest_paths.reconstruct.trace import RouteTrace
from congest_paths.rpaths.result import RPathsResult
from congest_paths.verify.oracles import (
    brute_force_mwc,
    check_cycles,
    check_rpaths,
    enumerate_simple_cycles,
    expand_cycle_witness,
    oracle_ansc,
    oracle_girth,
    oracle_mwc,
    oracle_rpaths,
    oracle_sisp2,
    ratio_of,
    simple_cycle_in,
    validate_cycle,
    validate_route,
)

from . import cycle_graph, ladder, path_graph


def bypass() -> tuple[Graph, PathSpec]:
    """A directed path 0 → 1 → 2 → 3 with a bypass 0 → 4 → 2."""
    graph = Graph.build(
        5,
        [(0, 1), (1, 2), (2, 3), (0, 4), (4, 2)],
        directed=True,
        weighted=False,
    )
    return graph, PathSpec.from_vertices(graph, [0, 1, 2, 3])


def test_oracles() -> None:
    """Test the oracle values on small graphs."""
    graph, path = bypass()
    assert oracle_rpaths(graph, path) == [3, 3, graph.inf]
    assert oracle_sisp2(graph, path) == 3
    triangle = Graph.build(
        4, [(0, 1), (1, 2), (0, 2), (2, 3)], directed=False, weighted=False
    )
    assert oracle_ansc(triangle) == [3, 3, 3, triangle.inf]
    assert oracle_mwc(triangle) == 3
    assert oracle_girth(ladder()) == 4
    assert oracle_girth(path_graph(4)) == path_graph(4).inf
    assert oracle_mwc(cycle_graph(3, directed=True, weights=(1, 2, 3))) == 6
    with pytest.raises(UsageError):
        oracle_girth(cycle_graph(3, directed=True))


def test_enumerate_simple_cycles() -> None:
    """Test that every simple cycle is found exactly once."""
    assert list(enumerate_simple_cycles(cycle_graph(4))) == [(0, 1, 2, 3)]
    assert list(enumerate_simple_cycles(cycle_graph(3, directed=True))) == [
        (0, 1, 2)
    ]
    complete = Graph.build(
        4,
        [(u, v) for u in range(4) for v in range(u + 1, 4)],
        directed=False,
        weighted=False,
    )
    # four triangles and three squares
    assert len(list(enumerate_simple_cycles(complete))) == 7
    assert not list(enumerate_simple_cycles(path_graph(5)))
    with pytest.raises(UsageError):
        list(enumerate_simple_cycles(path_graph(11)))


def test_brute_force() -> None:
    """Test the shortest path oracle against the cycle enumeration."""
    for seed in range(6):
        for directed in (False, True):
            graph = random_graph(
                8,
                0.35,
                weighted=True,
                directed=directed,
                max_weight=9,
                seed=seed,
            )
            assert brute_force_mwc(graph) == oracle_mwc(graph)


def test_check_rpaths() -> None:
    """Test that wrong weights are detected."""
    graph, path = bypass()
    none = (None,) * 3
    exact = RPathsResult("fake", path, (3, 3, graph.inf), none, graph.inf)
    check_rpaths(graph, exact)
    wrong = RPathsResult("fake", path, (3, 4, graph.inf), none, graph.inf)
    with pytest.raises(VerificationFailed):
        check_rpaths(graph, wrong)
    check_rpaths(graph, wrong, Fraction(3, 2))
    with pytest.raises(VerificationFailed):
        check_rpaths(
            graph,
            RPathsResult("fake", path, (3, 3, 3), (None,) * 3, graph.inf),
        )
    with pytest.raises(ValueError):
        RPathsResult("fake", path, (3,), (None,), graph.inf)


def test_check_cycles() -> None:
    """Test that wrong cycle weights are detected."""
    graph = cycle_graph(3)
    check_cycles(graph, CycleResult("fake", 3, None, graph.inf))
    with pytest.raises(VerificationFailed):
        check_cycles(graph, CycleResult("fake", 4, None, graph.inf))
    check_cycles(
        graph, CycleResult("fake", 5, None, graph.inf, ratio=Fraction(2))
    )
    with pytest.raises(VerificationFailed):
        check_cycles(
            graph, CycleResult("fake", 3, None, graph.inf, ansc=(3, 3, 4))
        )
    with pytest.raises(VerificationFailed):
        check_cycles(path_graph(3), CycleResult("fake", 2, None, 4))


def test_validate_route() -> None:
    """Test the checks of routed replacement paths."""
    graph, path = bypass()

    def trace(*vertices: int) -> RouteTrace:
        return RouteTrace(vertices, 0, len(vertices) - 1, failed=(0, 1))

    validate_route(graph, path, trace(0, 4, 2, 3), 3)
    validate_route(graph, path, trace(0, 4, 2, 3), 4, approximate=True)
    with pytest.raises(VerificationFailed):
        validate_route(graph, path, trace(0, 4, 2, 3), 4)
    with pytest.raises(VerificationFailed):
        validate_route(graph, path, trace(0, 1, 2, 3), 3)
    with pytest.raises(VerificationFailed):
        validate_route(graph, path, trace(0, 4, 2), 2)
    with pytest.raises(VerificationFailed):
        validate_route(graph, path, trace(0, 2, 3), 2)
    missing = RouteTrace((), 0, graph.inf, failed=(2, 3))
    validate_route(graph, path, missing, graph.inf)
    with pytest.raises(VerificationFailed):
        validate_route(graph, path, missing, 3)


def test_validate_cycle() -> None:
    """Test the checks of constructed cycles."""
    graph = ladder()
    assert validate_cycle(graph, [0, 1, 5, 4, 0]) == 4
    assert validate_cycle(graph, [0, 1, 5, 4, 0], 4, through=5) == 4
    for walk in ([0, 1, 5, 4], [0, 1, 0], [0, 1, 5, 1, 0], [0, 1, 2, 0]):
        with pytest.raises(VerificationFailed):
            validate_cycle(graph, walk)
    with pytest.raises(VerificationFailed):
        validate_cycle(graph, [0, 1, 5, 4, 0], through=7)
    with pytest.raises(VerificationFailed):
        validate_cycle(graph, [0, 1, 5, 4, 0], 5)


def test_simple_cycle_in() -> None:
    """Test the reduction of closed walks to simple cycles."""
    graph = ladder()
    walk = [3, 2, 1, 0, 4, 5, 1, 2, 3]
    cycle = simple_cycle_in(graph, walk)
    assert cycle == [1, 0, 4, 5, 1]
    assert validate_cycle(graph, cycle) == 4
    directed = cycle_graph(3, directed=True)
    assert simple_cycle_in(directed, [0, 1, 2, 0]) == [0, 1, 2, 0]


def test_expand_cycle_witness() -> None:
    """Test that a missing witness cannot be expanded."""
    graph = path_graph(4)
    with pytest.raises(MissingWitnessError):
        expand_cycle_witness(graph, mwc_undirected(graph))
    square = cycle_graph(4)
    walk = expand_cycle_witness(square, mwc_undirected(square))
    assert validate_cycle(square, simple_cycle_in(square, walk)) == 4


def test_ratio_of() -> None:
    """Test the achieved approximation ratios."""
    assert ratio_of(6, 3) == 2
    assert ratio_of(Fraction(9, 2), 3) == Fraction(3, 2)
    assert ratio_of(0, 0) == 1
