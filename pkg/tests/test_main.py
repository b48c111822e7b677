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

"""The tests for the command line interface of congest-paths."""

from __future__ import annotations

from pathlib import Path

import orjson as json
import pytest

from congest_paths import main
from congest_paths.errors import UsageError
from congest_paths.graph.graph_file import load_graph, load_path
from congest_paths.utils.better_config_parser import BetterConfigParser

from . import config


def run_main(monkeypatch: pytest.MonkeyPatch, *args: str) -> int | str:
    """Run main with the arguments and the config of the tests."""
    monkeypatch.setattr("sys.argv", ["congest-paths", *args])
    return main.main(config())


def report_of(text: str) -> dict[str, object]:
    """Parse the JSON block after the key: value lines."""
    data: dict[str, object] = json.loads(text.split("\n\n", 1)[1])
    return data


def test_gen(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    """Test generating a random graph with a path."""
    graph_file, path_file = tmp_path / "g.graph", tmp_path / "g.path"
    assert (
        run_main(
            monkeypatch,
            "gen",
            "--n=12",
            "--p=0.3",
            "--seed=1",
            "--weighted",
            "--w=9",
            f"--output={graph_file}",
            f"--path-output={path_file}",
        )
        == 0
    )
    assert graph_file.read_text("UTF-8").startswith("# random n=12 p=0.3")
    graph = load_graph(graph_file)
    assert graph.n == 12
    assert graph.weighted
    assert load_path(path_file, graph).h_st >= 1


def test_run(
    monkeypatch: pytest.MonkeyPatch,
    tmp_path: Path,
    capsys: pytest.CaptureFixture[str],
) -> None:
    """Test running a verified experiment on a generated graph."""
    graph_file, path_file = tmp_path / "g.graph", tmp_path / "g.path"
    run_main(
        monkeypatch,
        "gen",
        "--n=10",
        "--p=0.4",
        f"--output={graph_file}",
        f"--path-output={path_file}",
    )
    code = run_main(
        monkeypatch,
        "run",
        "--algo=rp-undir",
        f"--graph=file:{graph_file}",
        f"--path={path_file}",
        "--verify",
        "--timing",
    )
    assert code == 0
    text = capsys.readouterr().out
    assert "verify.oracle: pass\n" in text
    assert "wall_time: " in text
    report = report_of(text)
    assert report["passed"] is True
    echo = report["config"]
    assert isinstance(echo, dict)
    # the charging settings come from the config of the tests
    assert echo["charging"] is True


def test_gadget(
    monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
) -> None:
    """Test generating a gadget and checking its dichotomy."""
    code = run_main(
        monkeypatch, "gadget", "--family=dir-mwc", "--k=2", "--intersect"
    )
    assert code == 0
    text = capsys.readouterr().out
    assert text.startswith("# gadget dir-mwc k=2 seed=0\n")
    assert "# side: intersecting" in text


def test_route(
    monkeypatch: pytest.MonkeyPatch,
    tmp_path: Path,
    capsys: pytest.CaptureFixture[str],
) -> None:
    """Test routing around a failed edge of a ladder."""
    graph_file, path_file = tmp_path / "ladder.graph", tmp_path / "ladder.path"
    graph_file.write_text(
        "8 10 undirected unweighted\n"
        "0 1\n1 2\n2 3\n4 5\n5 6\n6 7\n0 4\n1 5\n2 6\n3 7\n",
        "UTF-8",
    )
    path_file.write_text("0 1 2 3\n", "UTF-8")
    code = run_main(
        monkeypatch,
        "route",
        "--algo=rp-undir",
        f"--graph=file:{graph_file}",
        f"--path={path_file}",
        "--fail=1,2",
        "--mode=onfly",
        "--verify",
    )
    assert code == 0
    text = capsys.readouterr().out
    assert "weight: 5\n" in text
    assert "status: pass\n" in text
    code = run_main(
        monkeypatch,
        "cycle",
        "--algo=mwc-undir",
        f"--graph=file:{graph_file}",
        "--through=5",
        "--verify",
    )
    assert code == 0
    assert "weight: 4\n" in capsys.readouterr().out


def test_errors(monkeypatch: pytest.MonkeyPatch) -> None:
    """Test the exit codes of invalid invocations."""
    assert (
        run_main(
            monkeypatch, "run", "--algo=nope", "--graph=random:n=5,p=0.5"
        )
        == UsageError.exit_code
    )
    assert (
        run_main(monkeypatch, "gen", "--n=5", "--p=2") == UsageError.exit_code
    )
    with pytest.raises(SystemExit):
        run_main(monkeypatch)
    broken = BetterConfigParser()
    broken.read_string("[SIMULATOR]\nbudget = 0\n")
    monkeypatch.setattr("sys.argv", ["congest-paths", "gen", "--n=5", "--p=1"])
    assert main.main(broken) == UsageError.exit_code


def test_suite(
    monkeypatch: pytest.MonkeyPatch,
    tmp_path: Path,
) -> None:
    """Test that the quick gadget corpus passes twice with one digest."""
    output = tmp_path / "suite.txt"
    code = run_main(
        monkeypatch, "suite", "gadget", "--repeat=2", f"--output={output}"
    )
    assert code == 0
    text = output.read_text("UTF-8")
    assert "failed: 0\n" in text
    assert "status: pass\n" in text
