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

"""Construct replacement paths and cycles from the command line."""

from __future__ import annotations

import logging
from collections.abc import Mapping
from typing import Any, Final, Literal

from ..errors import UsageError, VerificationFailed
from ..mwc.result import CycleResult
from ..reconstruct.cycles import construct_cycle
from ..reconstruct.routing import (
    build_rpath_tables,
    edge_index,
    onfly_construct_undirected,
    route_failover,
)
from ..reconstruct.trace import OnFlyState, RouteTrace
from ..rpaths.result import RPathsResult
from ..verify.oracles import (
    oracle_ansc,
    oracle_rpaths,
    simple_cycle_in,
    validate_cycle,
    validate_route,
)
from .experiment import ExperimentConfig, json_block
from .sources import load_instance

LOGGER: Final = logging.getLogger(__name__)

type Mode = Literal["table", "onfly"]


def parse_edge(text: str) -> tuple[int, int]:
    """Parse an edge given as u,v."""
    try:
        u, v = (int(part) for part in text.split(","))
    except ValueError as exc:
        raise UsageError(f"Expected an edge as u,v, got {text!r}") from exc
    return u, v


def _check(verdicts: dict[str, bool], name: str, check: Any) -> None:
    try:
        check()
    except VerificationFailed as exc:
        LOGGER.error("Check %s failed: %s", name, exc)
        verdicts[name] = False
    else:
        verdicts[name] = True


def cmd_route(
    cfg: ExperimentConfig, failed: tuple[int, int], mode: Mode = "table"
) -> tuple[RouteTrace, dict[str, bool]]:
    """Route a message around the failed edge of the s-t path."""
    instance = load_instance(cfg.source, cfg.path_file)
    algorithm = cfg.algo
    if algorithm.problem != "rpaths" or instance.path is None:
        raise UsageError("Routing needs a replacement paths algorithm and path")
    graph, path = instance.graph, instance.path
    result = algorithm.run(
        graph,
        path,
        eps=cfg.eps if algorithm.eps else None,
        config=cfg.sim_config(),
    )
    assert isinstance(result, RPathsResult)  # nosec: B101
    index = edge_index(path, failed, graph.directed)
    if mode == "onfly":
        trace = onfly_construct_undirected(
            graph,
            OnFlyState.from_result(result),
            failed,
            config=cfg.sim_config(),
        )
        bound = 3
    else:
        tables = build_rpath_tables(graph, result, config=cfg.sim_config())
        trace = route_failover(graph, tables, failed, config=cfg.sim_config())
        bound = 1
    verdicts: dict[str, bool] = {}
    if cfg.verify:
        expected = result.weights[index]

        def weight() -> None:
            want = oracle_rpaths(graph, path)[index]
            if min(expected, graph.inf) != want and not algorithm.approximate:
                raise VerificationFailed(
                    f"Reported weight {expected!r}, expected {want!r}"
                )

        def rounds() -> None:
            limit = path.h_st + bound * trace.hops
            if trace.rounds > limit:
                raise VerificationFailed(
                    f"The route took {trace.rounds!r} rounds, "
                    f"more than {limit!r}"
                )

        _check(verdicts, "weight", weight)
        _check(
            verdicts,
            "route",
            lambda: validate_route(
                graph,
                path,
                trace,
                expected,
                approximate=algorithm.approximate,
            ),
        )
        _check(verdicts, "rounds", rounds)
    return trace, verdicts


def cmd_cycle(
    cfg: ExperimentConfig, through: int, mode: Mode = "table"
) -> tuple[RouteTrace, dict[str, bool]]:
    """Send a message around the shortest cycle through a node."""
    instance = load_instance(cfg.source)
    algorithm = cfg.algo
    if algorithm.problem != "cycles":
        raise UsageError(f"{cfg.algorithm!r} computes no cycles")
    graph = instance.graph
    result = algorithm.run(graph, config=cfg.sim_config())
    assert isinstance(result, CycleResult)  # nosec: B101
    trace = construct_cycle(
        graph, result, through, mode, config=cfg.sim_config()
    )
    verdicts: dict[str, bool] = {}
    if cfg.verify:

        def cycle() -> None:
            want = oracle_ansc(graph)[through]
            if not trace.found:
                if want < graph.inf:
                    raise VerificationFailed(
                        f"No cycle through {through!r}, expected {want!r}"
                    )
                return
            if trace.weight != want:
                raise VerificationFailed(
                    f"The walk weighs {trace.weight!r}, expected {want!r}"
                )
            validate_cycle(graph, simple_cycle_in(graph, trace.vertices))

        _check(verdicts, "cycle", cycle)
    return trace, verdicts


def render_trace(
    cfg: ExperimentConfig,
    trace: RouteTrace,
    verdicts: Mapping[str, bool],
    mode: Mode,
) -> str:
    """Render a trace like a report."""
    found = trace.found
    data = {
        "config": cfg.as_dict(),
        "mode": mode,
        "trace": {
            "failed": trace.failed,
            "notification_rounds": trace.notification_rounds,
            "rounds": trace.rounds,
            "stored": trace.stored,
            "through": trace.through,
            "vertices": trace.vertices,
            "weight": trace.weight if found else None,
        },
        "verdicts": verdicts,
    }
    lines = [
        f"algorithm: {cfg.algorithm}",
        f"source: {cfg.source}",
        f"mode: {mode}",
        f"vertices: {' '.join(map(str, trace.vertices)) or '-'}",
        f"weight: {trace.weight if found else 'inf'}",
        f"rounds: {trace.rounds}",
    ]
    for name, verdict in sorted(verdicts.items()):
        lines.append(f"verify.{name}: {'pass' if verdict else 'fail'}")
    lines.append(f"status: {'pass' if all(verdicts.values()) else 'fail'}")
    return "\n".join(lines) + "\n\n" + json_block(data) + "\n"
