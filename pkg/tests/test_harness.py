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

"""The tests for running, benchmarking and verifying experiments."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import orjson as json
import pytest

from congest_paths.congest.simulator import SimConfig
from congest_paths.errors import UsageError
from congest_paths.graph.graph_file import dump_path, save_graph
from congest_paths.harness.bench import bench_source, cmd_bench, fit_slope
from congest_paths.harness.construct import (
    Mode,
    cmd_cycle,
    cmd_route,
    parse_edge,
    render_trace,
)
from congest_paths.harness.corpora import Case, cmd_suite, get_corpus, run_case
from congest_paths.harness.experiment import (
    ExperimentConfig,
    cmd_run,
    render_report,
)
from congest_paths.harness.registry import ALGORITHMS, get_algorithm
from congest_paths.harness.sources import load_instance, parse_params

from . import config, ladder, shortest_path

UNDIRECTED: str = "random:n=10,p=0.4,seed=1,weighted=sure,w=9,hst=3"
DIRECTED: str = "random:n=10,p=0.4,seed=2,directed=sure,weighted=sure,w=9"
MODES: tuple[Mode, ...] = ("table", "onfly")


def test_registry() -> None:
    """Test the lookup of algorithms and their ratios."""
    assert len(ALGORITHMS) == 10
    assert get_algorithm("rp-undir").problem == "rpaths"
    assert get_algorithm("ansc").directed is None
    with pytest.raises(UsageError, match="did you mean"):
        get_algorithm("rp-undri")
    assert get_algorithm("rp-undir").ratio(None) is None
    half = Fraction(1, 2)
    assert get_algorithm("rp-dirw-approx").ratio(half) == Fraction(3, 2)
    assert get_algorithm("mwc-wapprox").ratio(half) == 3
    assert get_algorithm("girth-approx").ratio(None) == 2


def test_algorithm_run() -> None:
    """Test the arguments the algorithms need."""
    graph = ladder()
    with pytest.raises(UsageError):
        get_algorithm("rp-undir").run(graph)
    with pytest.raises(UsageError):
        get_algorithm("mwc-dir").run(graph)
    with pytest.raises(UsageError):
        get_algorithm("mwc-wapprox").run(graph)
    with pytest.raises(UsageError, match="does not sample"):
        get_algorithm("rp-undir").run(
            graph, shortest_path(graph, 0, 3), prob=0.5
        )
    result = get_algorithm("rp-undir").run(graph, shortest_path(graph, 0, 3))
    assert result.algorithm == "rp-undir"


def test_parse_params() -> None:
    """Test the key=value lists of the sources."""
    allowed = frozenset({"n", "p"})
    assert parse_params("n=5, p=0.5", allowed) == {"n": "5", "p": "0.5"}
    with pytest.raises(UsageError):
        parse_params("n=5,q=1", allowed)
    with pytest.raises(UsageError):
        parse_params("n5", allowed)


def test_load_instance(tmp_path: Path) -> None:
    """Test the random, gadget and file sources."""
    instance = load_instance(UNDIRECTED)
    assert instance.graph.n == 10
    assert instance.graph.weighted
    assert instance.path is not None
    assert load_instance(UNDIRECTED).graph == instance.graph
    gadget = load_instance("gadget:family=dir-mwc,k=2,seed=1,intersect=sure")
    assert gadget.gadget is not None
    assert gadget.gadget.spec.intersecting
    assert gadget.path is None
    detour = load_instance("detour:n=12,hst=2,w=3")
    assert detour.graph.directed
    assert detour.graph.weighted
    assert detour.path is not None
    assert detour.path.vertices == (0, 1, 2)
    file = tmp_path / "ladder.graph"
    save_graph(ladder(), file)
    path_file = tmp_path / "ladder.path"
    path_file.write_text(dump_path(shortest_path(ladder(), 0, 3)), "UTF-8")
    loaded = load_instance(f"file:{file}", path_file)
    assert loaded.graph == ladder()
    assert loaded.path is not None
    assert loaded.path.vertices == (0, 1, 2, 3)
    for source in (
        "nope:x",
        "random:n=10",
        "random:n=10,p=2",
        "random:n=ten,p=0.5",
        "gadget:family=nope,k=2",
        "detour:n=4,hst=2",
        "detour:n=12,w=0",
        f"file:{tmp_path / 'missing.graph'}",
    ):
        with pytest.raises(UsageError):
            load_instance(source)


def test_experiment_config() -> None:
    """Test the validation and the config defaults of experiments."""
    with pytest.raises(UsageError):
        ExperimentConfig("nope", UNDIRECTED)
    with pytest.raises(UsageError):
        ExperimentConfig("rp-dirw-approx", DIRECTED)
    with pytest.raises(UsageError):
        ExperimentConfig("rp-dirw-approx", DIRECTED, eps=Fraction(0))
    with pytest.raises(UsageError):
        ExperimentConfig("rp-undir", UNDIRECTED, budget=0)
    cfg = ExperimentConfig.from_config(
        config(), algorithm="rp-undir", source=UNDIRECTED, seed=None
    )
    assert cfg.seed == 7
    assert cfg.eps == Fraction(1, 2)
    assert cfg.charging
    assert cfg.sim_config().charging == {"apsp": 2.0, "sssp": 1.5}
    assert cfg.as_dict()["eps"] is None


def test_cmd_run() -> None:
    """Test running and rendering a verified experiment."""
    cfg = ExperimentConfig("rp-undir", UNDIRECTED, verify=True)
    report = cmd_run(cfg)
    assert report.verdicts == {"oracle": True}
    assert report.passed
    assert report.sim["rounds"] > 0
    text = render_report(report)
    assert "algorithm: rp-undir\n" in text
    assert "status: pass\n" in text
    assert "wall_time" not in text
    data = json.loads(text.split("\n\n", 1)[1])
    assert data["outputs"]["path"] == report.outputs["path"]
    assert data["schema_version"] == 1
    assert "wall_time" in render_report(report, timing=True)
    # the same seed gives the same report
    assert cmd_run(cfg) == report


def test_cmd_run_cycles() -> None:
    """Test the checks of cycle experiments."""
    gadget = cmd_run(
        ExperimentConfig(
            "mwc-undir",
            "gadget:family=undirw-mwc,k=2,seed=0,intersect=sure",
            verify=True,
        )
    )
    assert gadget.verdicts == {
        "dichotomy": True,
        "oracle": True,
        "witness": True,
    }
    approx = cmd_run(
        ExperimentConfig(
            "mwc-wapprox",
            "random:n=10,p=0.4,seed=3,weighted=sure,w=9",
            eps=Fraction(1, 2),
            verify=True,
        )
    )
    assert approx.passed
    assert approx.config["eps"] == Fraction(1, 2)
    assert "weight: " in render_report(approx)


def test_fit_slope() -> None:
    """Test the fitted exponent."""
    assert fit_slope([10, 100], [10, 1000]) == pytest.approx(2.0)
    assert fit_slope([10, 100, 1000], [5, 5, 5]) == pytest.approx(0.0)
    assert fit_slope([10], [3]) is None


def test_bench() -> None:
    """Test a small benchmark and its errors."""
    source = bench_source(8, 1, degree=4, directed=False, weighted=True, hst=3)
    assert (
        source
        == "random:n=8,p=0.571429,seed=1,directed=nope,weighted=sure,hst=3"
    )
    table = cmd_bench("rp-undir", [8, 12], [0, 1])
    assert [row.n for row in table.rows] == [8, 12]
    assert all(len(row.samples) == 2 for row in table.rows)
    assert table.slope is not None
    assert "slope: " in table.render()
    assert table.as_dict()["algorithm"] == "rp-undir"
    for sizes, seeds in (([], [0]), ([12, 8], [0]), ([8], [])):
        with pytest.raises(UsageError):
            cmd_bench("rp-undir", sizes, seeds)
    with pytest.raises(UsageError):
        cmd_bench("mwc-wapprox", [8], [0])
    with pytest.raises(UsageError):
        cmd_bench("girth-approx", [8], [0], weighted=True)


def test_corpora() -> None:
    """Test the registered corpora."""
    for name in ("exact", "approx", "gadget", "recon"):
        assert get_corpus(name)
        assert len(get_corpus(f"{name}-corpus")) == len(get_corpus(name))
    assert len(get_corpus("exact", True)) > len(get_corpus("exact"))
    with pytest.raises(UsageError, match="did you mean"):
        get_corpus("exakt")


def test_suite() -> None:
    """Test that the quick gadget corpus passes."""
    summary = cmd_suite("gadget")
    assert summary.passed
    assert not summary.failures
    assert len(summary.outcomes) == len(get_corpus("gadget"))
    assert summary.digest == cmd_suite("gadget").digest


def test_run_case() -> None:
    """Test route, cycle and failing cases."""
    sim = SimConfig()
    for mode in MODES:
        outcome = run_case(
            Case("recon", "route", "route", UNDIRECTED, "rp-undir", mode=mode),
            sim,
        )
        assert outcome.passed, outcome.detail
        outcome = run_case(
            Case("recon", "cycle", "cycle", DIRECTED, "mwc-dir", mode=mode),
            sim,
        )
        assert outcome.passed, outcome.detail
    failing = run_case(Case("recon", "bad", "run", DIRECTED, "rp-undir"))
    assert not failing.passed
    assert "undirected" in failing.detail


def test_reseed_case() -> None:
    """Test that a missed detour is recovered by another seed."""
    case = next(item for item in get_corpus("exact") if item.kind == "reseed")
    assert case.prob is not None and case.prob < 1
    outcome = run_case(case)
    assert outcome.passed, outcome.detail
    assert outcome.detail.startswith("failed with seed")
    always = run_case(
        Case(
            "exact",
            "always",
            "reseed",
            "detour:n=12",
            "rp-dirunw-sample",
            prob=1.0,
        )
    )
    assert not always.passed
    assert "None of" in always.detail


def test_construct() -> None:
    """Test routing and cycle construction from the command line."""
    assert parse_edge("1,2") == (1, 2)
    for text in ("1", "a,b", "1,2,3"):
        with pytest.raises(UsageError):
            parse_edge(text)
    cfg = ExperimentConfig("rp-undir", UNDIRECTED, verify=True)
    path = load_instance(UNDIRECTED).path
    assert path is not None
    for mode in MODES:
        trace, verdicts = cmd_route(cfg, path.edges[0], mode)
        assert verdicts == {"route": True, "rounds": True, "weight": True}
        assert f"mode: {mode}\n" in render_trace(cfg, trace, verdicts, mode)
    cycle_cfg = ExperimentConfig("mwc-undir", UNDIRECTED, verify=True)
    trace, verdicts = cmd_cycle(cycle_cfg, 0, "onfly")
    assert verdicts == {"cycle": True}
    assert trace.through == 0
    with pytest.raises(UsageError):
        cmd_route(cycle_cfg, path.edges[0])
    with pytest.raises(UsageError):
        cmd_cycle(cfg, 0)
