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

"""The tests for the lower bound gadgets."""

from __future__ import annotations

import pytest

from congest_paths.errors import InvalidGadgetSpecError
from congest_paths.graph.graph import Graph
from congest_paths.graph.oracle import bfs
from congest_paths.verify.gadgets import (
    FAMILIES,
    Family,
    GadgetSpec,
    check_dichotomy,
    gen_gadget,
    random_spec,
)
from congest_paths.verify.oracles import oracle_mwc, oracle_sisp2

from . import path_graph


def test_dir_mwc() -> None:
    """Test the directed cycle gadget with and without a common bit."""
    spec = GadgetSpec.from_bits("dir-mwc", 2, [(1, 1)], [(1, 1)], sink=True)
    assert spec.intersecting
    gadget = gen_gadget(spec)
    assert gadget.graph.directed
    assert oracle_mwc(gadget.graph) == 4
    assert gadget.graph.has_arc(gadget.vertex("l1"), gadget.vertex("r1"))
    verdict = check_dichotomy(spec, gadget)
    assert verdict.holds
    assert verdict.side == "intersecting"
    assert verdict.bound == 4
    disjoint = GadgetSpec.from_bits("dir-mwc", 2, [(1, 1)], [(1, 2)], sink=True)
    assert not disjoint.intersecting
    assert check_dichotomy(disjoint).measured >= 8


def test_qcycle() -> None:
    """Test that longer chains give longer cycles."""
    spec = GadgetSpec.from_bits("qcycle", 2, [(2, 1)], [(2, 1)], q=6, sink=True)
    gadget = gen_gadget(spec)
    assert oracle_mwc(gadget.graph) == 6
    assert "l2.3" in gadget.names
    assert check_dichotomy(spec, gadget).relation == "=="


def string_gadget_size(family: Family, k: int, q: int) -> int:
    """The number of vertices of a string gadget, without the sink."""
    return {
        "dir-mwc": 4 * k,
        "dirw-rpaths": 6 * k + 1,
        "undirw-mwc": 4 * k,
        "qcycle": (q - 3) * k + 3 * k,
    }[family]


def test_gadget_sizes() -> None:
    """Test the vertex counts of the string gadgets and their dichotomy."""
    families: tuple[Family, ...] = (
        "dir-mwc",
        "dirw-rpaths",
        "undirw-mwc",
        "qcycle",
    )
    for family in families:
        for q in (4, 5, 6) if family == "qcycle" else (4,):
            for k in (2, 3, 4, 5):
                for seed, intersect in ((0, True), (1, False)):
                    spec = random_spec(
                        family, k, seed=seed, intersect=intersect, q=q
                    )
                    gadget = gen_gadget(spec)
                    size = string_gadget_size(family, k, q)
                    assert gadget.graph.n == size + 1
                    assert gadget.vertex("sink") == size
                    if k <= 3:
                        assert check_dichotomy(spec, gadget).holds


def test_undirw_mwc() -> None:
    """Test the weighted undirected cycle gadget."""
    spec = GadgetSpec.from_bits(
        "undirw-mwc", 2, [(1, 1)], [(1, 1)], heavy=3, sink=True
    )
    gadget = gen_gadget(spec)
    assert not gadget.graph.directed
    assert gadget.path is None
    assert oracle_mwc(gadget.graph) == 2 + 2 * 3
    disjoint = GadgetSpec.from_bits(
        "undirw-mwc", 2, [(1, 1)], [(2, 2)], heavy=3, sink=True
    )
    verdict = check_dichotomy(disjoint)
    assert verdict.bound == min(4 * 3, 3 * 3 + 3)


def test_dirunw_rpaths() -> None:
    """Test that the replacement path exists iff H connects s and t."""
    base = path_graph(3)
    connected = GadgetSpec(
        "dirunw-rpaths",
        3,
        base=base,
        subgraph=frozenset({(0, 1), (1, 2)}),
        s=0,
        t=2,
    )
    gadget = gen_gadget(connected)
    assert gadget.path is not None
    assert gadget.path.h_st == 1
    assert oracle_sisp2(gadget.graph, gadget.path) == 4
    assert check_dichotomy(connected, gadget).side == "connected"
    disconnected = GadgetSpec(
        "dirunw-rpaths",
        3,
        base=base,
        subgraph=frozenset({(1, 2)}),
        s=0,
        t=2,
    )
    verdict = check_dichotomy(disconnected)
    assert verdict.side == "disconnected"
    assert verdict.relation == "infinite"
    reachability = GadgetSpec(
        "dirunw-rpaths",
        3,
        base=base,
        subgraph=frozenset({(0, 1), (1, 2)}),
        s=0,
        t=2,
        shortcut=False,
    )
    gadget = gen_gadget(reachability)
    assert gadget.path is None
    graph = gadget.graph
    assert bfs(graph, gadget.vertex("s'"))[gadget.vertex("t'")] == 4
    assert check_dichotomy(reachability, gadget).side == "reachable"


def test_undir_rpaths() -> None:
    """Test that the second shortest path goes through the base graph."""
    spec = GadgetSpec("undir-rpaths", 3, base=path_graph(3), s=0, t=2)
    gadget = gen_gadget(spec)
    assert gadget.path is not None
    assert oracle_sisp2(gadget.graph, gadget.path) == 4
    verdict = check_dichotomy(spec, gadget)
    assert verdict.side == "exact"
    assert verdict.bound == 4


def test_random_specs() -> None:
    """Test the dichotomy of random gadgets of every family."""
    for family in FAMILIES:
        for intersect in (False, True):
            for seed in range(3):
                spec = random_spec(
                    family,
                    3 if family in {"dir-mwc", "qcycle", "undirw-mwc"} else 6,
                    seed=seed,
                    intersect=intersect,
                    q=5,
                )
                assert check_dichotomy(spec).holds
                if family in {"dirw-rpaths", "dir-mwc", "undirw-mwc"}:
                    assert spec.intersecting == intersect


def test_random_spec_deterministic() -> None:
    """Test that the seed determines the gadget."""
    first = random_spec("dirw-rpaths", 3, seed=4, intersect=True)
    second = random_spec("dirw-rpaths", 3, seed=4, intersect=True)
    assert first == second
    assert gen_gadget(first).graph.edges == gen_gadget(second).graph.edges


def test_invalid_specs() -> None:
    """Test that broken specs are rejected."""
    with pytest.raises(InvalidGadgetSpecError):
        GadgetSpec("dir-mwc", 2, (True,), (True,))
    with pytest.raises(InvalidGadgetSpecError):
        GadgetSpec("dir-mwc", 0)
    with pytest.raises(InvalidGadgetSpecError):
        GadgetSpec("nope", 1, (True,), (True,))  # type: ignore[arg-type]
    with pytest.raises(InvalidGadgetSpecError):
        GadgetSpec.from_bits("qcycle", 1, [(1, 1)], [], q=3)
    with pytest.raises(InvalidGadgetSpecError):
        GadgetSpec.from_bits("undirw-mwc", 1, [(1, 1)], [], heavy=1)
    with pytest.raises(InvalidGadgetSpecError):
        GadgetSpec.from_bits("dir-mwc", 2, [(3, 1)], [])
    with pytest.raises(InvalidGadgetSpecError):
        GadgetSpec("dirunw-rpaths", 3)
    with pytest.raises(InvalidGadgetSpecError):
        GadgetSpec("dirunw-rpaths", 3, base=path_graph(3), s=1, t=1)
    with pytest.raises(InvalidGadgetSpecError):
        GadgetSpec(
            "undir-rpaths",
            3,
            base=path_graph(3),
            subgraph=frozenset({(0, 2)}),
        )
    weighted = Graph.build(2, [(0, 1, 3)], directed=False, weighted=True)
    with pytest.raises(InvalidGadgetSpecError):
        GadgetSpec("dirunw-rpaths", 2, base=weighted)
    with pytest.raises(InvalidGadgetSpecError):
        random_spec("undir-rpaths", 1)
    with pytest.raises(InvalidGadgetSpecError):
        GadgetSpec.from_bits("dir-mwc", 2, [], []).bit(0, 1)
