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

"""
The command line interface of congest-paths.

Every subcommand prints a key: value report followed by a JSON block.
Config values can be overridden with --section-option=value.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from collections.abc import Sequence
from configparser import ConfigParser
from fractions import Fraction
from logging.handlers import TimedRotatingFileHandler
from pathlib import Path
from typing import Final

import regex
from ecs_logging import StdlibFormatter
from setproctitle import setproctitle
from tornado.log import LogFormatter

from . import NAME, VERSION
from .congest.simulator import SimConfig
from .errors import CongestPathsError, UsageError, VerificationFailed
from .graph.graph import random_graph
from .graph.graph_file import dump_graph, dump_path
from .harness.bench import DEFAULT_DEGREE, MIN_SEEDS, cmd_bench
from .harness.construct import cmd_cycle, cmd_route, parse_edge, render_trace
from .harness.corpora import CORPORA, cmd_suite
from .harness.experiment import (
    ExperimentConfig,
    cmd_run,
    json_block,
    render_report,
)
from .harness.registry import ALGORITHMS
from .harness.sources import random_path
from .utils.better_config_parser import BetterConfigParser
from .utils.utils import (
    ArgparseNamespace,
    create_argument_parser,
    get_arguments_without_help,
    str_to_bool,
    str_to_fraction,
)
from .verify.gadgets import FAMILIES, check_dichotomy, gen_gadget, random_spec

LOGGER: Final = logging.getLogger(__name__)

ALGO_HELP: Final = "one of " + ", ".join(ALGORITHMS)


def setup_logging(  # pragma: no cover
    config: ConfigParser,
    force: bool = False,
) -> None:
    """Setup logging."""  # noqa: D401
    root_logger = logging.getLogger()

    if root_logger.handlers:
        if not force:
            return
        for handler in root_logger.handlers[:]:
            root_logger.removeHandler(handler)
            handler.close()

    debug = config.getboolean("LOGGING", "DEBUG", fallback=sys.flags.dev_mode)

    logging.captureWarnings(True)

    root_logger.setLevel(logging.DEBUG if debug else logging.INFO)

    stream_handler = logging.StreamHandler()
    if sys.flags.dev_mode:
        fmt = regex.sub(r"%\((end_)?color\)s", "", LogFormatter.DEFAULT_FORMAT)
        formatter = logging.Formatter(fmt, LogFormatter.DEFAULT_DATE_FORMAT)
    else:
        formatter = LogFormatter()
    stream_handler.setFormatter(formatter)
    root_logger.addHandler(stream_handler)

    if path := config.get("LOGGING", "PATH", fallback=None):
        os.makedirs(path, 0o755, True)
        file_handler = TimedRotatingFileHandler(
            os.path.join(path, f"{NAME}.log"),
            encoding="UTF-8",
            when="midnight",
            backupCount=30,
            utc=True,
        )
        file_handler.setFormatter(StdlibFormatter())
        root_logger.addHandler(file_handler)


def int_list(text: str) -> list[int]:
    """Parse comma separated integers."""
    return [int(part) for part in text.split(",") if part.strip()]


def _add_experiment_options(
    parser: argparse.ArgumentParser, *, graph: bool = True
) -> None:
    if graph:
        parser.add_argument(
            "--graph",
            required=True,
            help=(
                "file:PATH, random:n=..,p=.., gadget:family=..,k=.. "
                "or detour:n=.."
            ),
            metavar="SOURCE",
        )
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--eps", type=str_to_fraction, default=None)
    parser.add_argument("--budget", type=int, default=None)
    parser.add_argument(
        "--charge",
        action="store_true",
        default=None,
        help="report the charged rounds of the cited subroutines",
    )
    parser.add_argument("--verify", action="store_true")
    parser.add_argument("--output", type=Path, default=None, metavar="PATH")


def create_command_parser() -> argparse.ArgumentParser:
    """Create the parser of the subcommands."""
    parser = argparse.ArgumentParser(
        prog=NAME.removesuffix("-test").removesuffix("-dev"),
        allow_abbrev=False,
        epilog="Config values can be overridden with --section-option=VALUE.",
    )
    parser.add_argument("--version", action="version", version=VERSION)
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run an algorithm on one graph")
    run.add_argument("--algo", required=True, help=ALGO_HELP)
    run.add_argument("--path", type=Path, default=None, metavar="PATH")
    run.add_argument("--timing", action="store_true")
    _add_experiment_options(run)

    bench = commands.add_parser("bench", help="measure round scaling")
    bench.add_argument("--algo", required=True, help=ALGO_HELP)
    bench.add_argument("--sizes", type=int_list, required=True)
    bench.add_argument("--seeds", type=int, default=MIN_SEEDS)
    bench.add_argument("--degree", type=float, default=DEFAULT_DEGREE)
    bench.add_argument("--hst", type=int, default=None)
    bench.add_argument("--weighted", type=str_to_bool, default=None)
    _add_experiment_options(bench, graph=False)

    suite = commands.add_parser("suite", help="verify a whole corpus")
    suite.add_argument("corpus", help=f"one of {', '.join(CORPORA)}")
    suite.add_argument("--full", action="store_true")
    suite.add_argument("--repeat", type=int, default=1)
    suite.add_argument("--output", type=Path, default=None, metavar="PATH")

    gadget = commands.add_parser("gadget", help="generate a gadget graph")
    gadget.add_argument("--family", required=True, choices=FAMILIES)
    gadget.add_argument("--k", type=int, required=True)
    gadget.add_argument("--seed", type=int, default=0)
    side = gadget.add_mutually_exclusive_group()
    side.add_argument(
        "--intersect", dest="intersect", action="store_const", const=True
    )
    side.add_argument(
        "--disjoint", dest="intersect", action="store_const", const=False
    )
    gadget.add_argument("--q", type=int, default=4)
    gadget.add_argument("--heavy", type=int, default=2)
    gadget.add_argument("--no-sink", dest="sink", action="store_false")
    gadget.add_argument("--no-shortcut", dest="shortcut", action="store_false")
    gadget.add_argument("--output", type=Path, default=None, metavar="PATH")
    gadget.add_argument("--path-output", type=Path, default=None)

    gen = commands.add_parser("gen", help="generate a random graph")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--p", type=float, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--directed", action="store_true")
    gen.add_argument("--weighted", action="store_true")
    gen.add_argument("--w", type=int, default=100)
    gen.add_argument("--hst", type=int, default=None)
    gen.add_argument("--output", type=Path, default=None, metavar="PATH")
    gen.add_argument("--path-output", type=Path, default=None)

    route = commands.add_parser("route", help="route around a failed edge")
    route.add_argument("--algo", required=True, help=ALGO_HELP)
    route.add_argument("--path", type=Path, default=None, metavar="PATH")
    route.add_argument("--fail", type=parse_edge, required=True)
    route.add_argument("--mode", choices=("table", "onfly"), default="table")
    _add_experiment_options(route)

    cycle = commands.add_parser("cycle", help="trace a shortest cycle")
    cycle.add_argument("--algo", default="ansc", help=ALGO_HELP)
    cycle.add_argument("--through", type=int, required=True)
    cycle.add_argument("--mode", choices=("table", "onfly"), default="table")
    _add_experiment_options(cycle)

    return parser


def emit(text: str, output: Path | None) -> None:
    """Write the text to the output file or to stdout."""
    if output is None:
        sys.stdout.write(text)
        return
    try:
        output.write_text(text, encoding="UTF-8")
    except OSError as exc:
        raise UsageError(f"Cannot write {str(output)!r}: {exc}") from exc
    LOGGER.info("Wrote %s", output)


def experiment_config(
    config: BetterConfigParser, args: argparse.Namespace
) -> ExperimentConfig:
    """Combine the config with the options of the subcommand."""
    return ExperimentConfig.from_config(
        config,
        algorithm=args.algo,
        source=args.graph,
        path_file=getattr(args, "path", None),
        seed=args.seed,
        eps=args.eps,
        budget=args.budget,
        charging=args.charge,
        verify=args.verify,
        output=args.output,
    )


def _run(config: BetterConfigParser, args: argparse.Namespace) -> int:
    cfg = experiment_config(config, args)
    report = cmd_run(cfg)
    emit(render_report(report, timing=args.timing), cfg.output)
    return 0 if report.passed else VerificationFailed.exit_code


def _bench(
    config: BetterConfigParser, args: argparse.Namespace, parallel: int
) -> int:
    sim = SimConfig.from_config(config)
    seed = sim.seed if args.seed is None else args.seed
    eps = args.eps or config.getfraction(
        "EXPERIMENT", "EPS", fallback=Fraction(1, 4)
    )
    table = cmd_bench(
        args.algo,
        args.sizes,
        list(range(seed, seed + args.seeds)),
        degree=args.degree,
        hst=args.hst,
        eps=eps,
        weighted=args.weighted,
        config=SimConfig(
            seed=seed,
            word_factor=sim.word_factor,
            budget=sim.budget if args.budget is None else args.budget,
            virtual_time=sim.virtual_time,
            threads=sim.threads,
            charging=sim.charging,
        ),
        parallel=parallel,
    )
    text = table.render() + "\n" + json_block(table.as_dict()) + "\n"
    emit(text, args.output)
    return 0


def _suite(
    config: BetterConfigParser, args: argparse.Namespace, parallel: int
) -> int:
    sim = SimConfig.from_config(config)
    summaries = [
        cmd_suite(args.corpus, full=args.full, config=sim, parallel=parallel)
        for _ in range(max(1, args.repeat))
    ]
    summary = summaries[0]
    deterministic = len({other.digest for other in summaries}) == 1
    if not deterministic:
        LOGGER.error("The repeated runs of %s differ", args.corpus)
    lines = [
        f"corpus: {summary.corpus}",
        f"cases: {len(summary.outcomes)}",
        f"failed: {len(summary.failures)}",
        f"digest: {summary.digest}",
    ]
    lines.extend(
        f"fail: {outcome.name}: {outcome.detail}"
        for outcome in summary.failures
    )
    passed = summary.passed and deterministic
    lines.append(f"status: {'pass' if passed else 'fail'}")
    emit(
        "\n".join(lines) + "\n\n" + json_block(summary.as_dict()) + "\n",
        args.output,
    )
    return 0 if passed else VerificationFailed.exit_code


def _graph_text(graph_text: str, comments: Sequence[str]) -> str:
    return "".join(f"# {comment}\n" for comment in comments) + graph_text


def _gadget(args: argparse.Namespace) -> int:
    spec = random_spec(
        args.family,
        args.k,
        seed=args.seed,
        intersect=args.intersect,
        q=args.q,
        heavy=args.heavy,
        sink=args.sink,
        shortcut=args.shortcut,
    )
    gadget = gen_gadget(spec)
    comments = [f"gadget {args.family} k={args.k} seed={args.seed}"]
    status = 0
    try:
        verdict = check_dichotomy(spec, gadget)
    except VerificationFailed as exc:
        LOGGER.error("%s", exc)
        status = exc.exit_code
    else:
        comments.append(
            f"side: {verdict.side}, expected {verdict.relation} "
            f"{verdict.bound}, measured {verdict.measured}"
        )
    if gadget.path is not None and args.path_output is None:
        comments.append(f"path: {dump_path(gadget.path).strip()}")
    emit(_graph_text(dump_graph(gadget.graph), comments), args.output)
    if gadget.path is not None and args.path_output is not None:
        emit(dump_path(gadget.path), args.path_output)
    return status


def _gen(args: argparse.Namespace) -> int:
    try:
        graph = random_graph(
            args.n,
            args.p,
            directed=args.directed,
            weighted=args.weighted,
            max_weight=args.w if args.weighted else 1,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    path = random_path(graph, args.seed, args.hst)
    comments = [f"random n={args.n} p={args.p} seed={args.seed}"]
    if path is not None and args.path_output is None:
        comments.append(f"path: {dump_path(path).strip()}")
    emit(_graph_text(dump_graph(graph), comments), args.output)
    if path is not None and args.path_output is not None:
        emit(dump_path(path), args.path_output)
    return 0


def _construct(config: BetterConfigParser, args: argparse.Namespace) -> int:
    cfg = experiment_config(config, args)
    if args.command == "route":
        trace, verdicts = cmd_route(cfg, args.fail, args.mode)
    else:
        trace, verdicts = cmd_cycle(cfg, args.through, args.mode)
    emit(render_trace(cfg, trace, verdicts, args.mode), cfg.output)
    return 0 if all(verdicts.values()) else VerificationFailed.exit_code


def run_command(
    config: BetterConfigParser, args: argparse.Namespace, parallel: int = 1
) -> int:
    """Run the subcommand and return the exit code."""
    match args.command:
        case "run":
            return _run(config, args)
        case "bench":
            return _bench(config, args, parallel)
        case "suite":
            return _suite(config, args, parallel)
        case "gadget":
            return _gadget(args)
        case "gen":
            return _gen(args)
        case "route" | "cycle":
            return _construct(config, args)
    raise UsageError(f"Unknown command {args.command!r}")


def main(config: BetterConfigParser | None = None) -> int | str:
    """Parse the command line and run the subcommand."""
    setproctitle(NAME)

    parser = create_argument_parser()
    parser.allow_abbrev = False
    args, _ = parser.parse_known_args(
        get_arguments_without_help(), ArgparseNamespace()
    )

    config = config or BetterConfigParser.from_path(*args.config)
    assert config is not None
    config.add_override_argument_parser(parser)

    setup_logging(config)

    LOGGER.info("Starting %s %s", NAME, VERSION)

    try:
        SimConfig.from_config(config)
    except ValueError as exc:
        LOGGER.error("Invalid configuration: %s", exc)
        return UsageError.exit_code
    parallel = config.getint("GENERAL", "PARALLEL", fallback=1)
    config.getfraction("EXPERIMENT", "EPS", fallback=Fraction(1, 4))

    if args.save_config_to:
        config.dump(args.save_config_to)

    try:
        command, rest = create_command_parser().parse_known_args(sys.argv[1:])
        parser.parse_args(rest)
        return run_command(config, command, parallel)
    except CongestPathsError as exc:
        LOGGER.error("%s", exc)
        return exc.exit_code
