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

"""Single experiments: run an algorithm, verify it and report on it."""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Final

import orjson as json

from .. import ORJSON_OPTIONS, REPORT_SCHEMA_VERSION, VERSION
from ..congest.simulator import DEFAULT_WORD_FACTOR, SimConfig, default_budget
from ..errors import UsageError, VerificationFailed
from ..graph.graph import Graph
from ..mwc.result import CycleWitness
from ..rpaths.result import RPathsResult, Witness
from ..utils.better_config_parser import BetterConfigParser
from ..utils.utils import Timer, to_jsonable
from ..verify.gadgets import check_dichotomy
from ..verify.oracles import (
    check_cycle_witness,
    check_cycles,
    check_rpaths,
    oracle_girth,
)
from .registry import Algorithm, Result, get_algorithm
from .sources import Instance, load_instance

LOGGER: Final = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class ExperimentConfig:  # pylint: disable=too-many-instance-attributes
    """Everything needed to repeat an experiment bit for bit."""

    algorithm: str
    source: str
    path_file: Path | None = None
    seed: int = 0
    eps: Fraction | None = None
    budget: int = field(default_factory=default_budget)
    charging: bool = False
    verify: bool = False
    output: Path | None = None
    word_factor: int = DEFAULT_WORD_FACTOR
    sssp_factor: float = 1.0
    apsp_factor: float = 1.0

    def __post_init__(self) -> None:
        """Check the algorithm id and eps."""
        algorithm = get_algorithm(self.algorithm)
        if algorithm.eps and self.eps is None:
            raise UsageError(f"{self.algorithm!r} needs --eps")
        if self.eps is not None and self.eps <= 0:
            raise UsageError(f"eps must be positive: {self.eps!r}")
        if self.budget <= 0:
            raise UsageError(f"The budget must be positive: {self.budget!r}")

    @classmethod
    def from_config(
        cls, config: BetterConfigParser, **overrides: Any
    ) -> ExperimentConfig:
        """Take the defaults from the config; overrides win."""
        sim = SimConfig.from_config(config)
        values: dict[str, Any] = {
            "seed": sim.seed,
            "budget": sim.budget,
            "charging": sim.charging is not None,
            "word_factor": sim.word_factor,
            "eps": config.getfraction(
                "EXPERIMENT", "EPS", fallback=Fraction(1, 4)
            ),
            "sssp_factor": config.getfloat(
                "CHARGING", "SSSP_FACTOR", fallback=1.0
            ),
            "apsp_factor": config.getfloat(
                "CHARGING", "APSP_FACTOR", fallback=1.0
            ),
        }
        values.update(
            (key, value)
            for key, value in overrides.items()
            if value is not None
        )
        return cls(**values)

    @property
    def algo(self) -> Algorithm:
        """The registered algorithm."""
        return get_algorithm(self.algorithm)

    def sim_config(self) -> SimConfig:
        """The simulator configuration of the experiment."""
        return SimConfig(
            seed=self.seed,
            word_factor=self.word_factor,
            budget=self.budget,
            charging=(
                {"apsp": self.apsp_factor, "sssp": self.sssp_factor}
                if self.charging
                else None
            ),
        )

    def as_dict(self) -> dict[str, Any]:
        """The config echo of the report."""
        return {
            "algorithm": self.algorithm,
            "apsp_factor": self.apsp_factor,
            "budget": self.budget,
            "charging": self.charging,
            "eps": self.eps if self.algo.eps else None,
            "path_file": (
                None if self.path_file is None else str(self.path_file)
            ),
            "seed": self.seed,
            "source": self.source,
            "sssp_factor": self.sssp_factor,
            "verify": self.verify,
            "word_factor": self.word_factor,
        }


@dataclass(frozen=True, slots=True)
class Report:
    """The outcome of one experiment."""

    config: Mapping[str, Any]
    sim: Mapping[str, Any]
    outputs: Mapping[str, Any]
    verdicts: Mapping[str, bool]
    wall_time: float = field(default=0.0, compare=False)

    @property
    def passed(self) -> bool:
        """Whether all verifications passed."""
        return all(self.verdicts.values())

    def as_dict(self, *, timing: bool = False) -> dict[str, Any]:
        """Convert the report to plain data."""
        data = {
            "config": self.config,
            "outputs": self.outputs,
            "passed": self.passed,
            "schema_version": REPORT_SCHEMA_VERSION,
            "sim": self.sim,
            "verdicts": self.verdicts,
            "version": VERSION,
        }
        if timing:
            data["wall_time"] = round(self.wall_time, 6)
        return data


def _finite(value: int | Fraction, inf: int) -> int | Fraction | None:
    return None if value >= inf else value


def _witness(witness: Witness | CycleWitness | None) -> list[Any] | None:
    return None if witness is None else list(witness)


def describe(result: Result) -> dict[str, Any]:
    """The outputs of a result as plain data; null means infinite."""
    inf = result.inf
    if isinstance(result, RPathsResult):
        return {
            "h_rep": result.h_rep,
            "h_st": result.path.h_st,
            "path": list(result.path.vertices),
            "sisp2": _finite(result.sisp2, inf),
            "weights": [_finite(weight, inf) for weight in result.weights],
            "witnesses": [_witness(witness) for witness in result.witnesses],
        }
    return {
        "ansc": (
            None
            if result.ansc is None
            else [_finite(weight, inf) for weight in result.ansc]
        ),
        "h_cyc": result.h_cyc,
        "level": result.level,
        "ratio": result.ratio,
        "scaled_length": result.scaled_length,
        "weight": _finite(result.weight, inf),
        "witness": _witness(result.witness),
    }


def _cycle_ratio(
    graph: Graph, algorithm: Algorithm, eps: Fraction | None
) -> Fraction | None:
    if algorithm.name != "girth-approx":
        return algorithm.ratio(eps)
    girth = oracle_girth(graph)
    return 2 - Fraction(1, girth) if girth < graph.inf else None


def verify_result(
    instance: Instance,
    algorithm: Algorithm,
    result: Result,
    eps: Fraction | None = None,
) -> dict[str, bool]:
    """Compare the result with the oracles; failures are logged."""
    graph = instance.graph
    checks: dict[str, Any] = {}
    if isinstance(result, RPathsResult):
        checks["oracle"] = lambda: check_rpaths(
            graph, result, algorithm.ratio(eps)
        )
    else:
        checks["oracle"] = lambda: check_cycles(
            graph, result, _cycle_ratio(graph, algorithm, eps)
        )
        checks["witness"] = lambda: check_cycle_witness(graph, result)
    if instance.gadget is not None:
        gadget = instance.gadget
        checks["dichotomy"] = lambda: check_dichotomy(gadget.spec, gadget)
    verdicts = {}
    for name, check in checks.items():
        try:
            check()
        except VerificationFailed as exc:
            LOGGER.error("Check %s failed: %s", name, exc)
            verdicts[name] = False
        else:
            verdicts[name] = True
    return verdicts


def cmd_run(cfg: ExperimentConfig) -> Report:
    """Run the experiment, with verification if requested."""
    timer = Timer()
    instance = load_instance(cfg.source, cfg.path_file)
    algorithm = cfg.algo
    result = algorithm.run(
        instance.graph,
        instance.path,
        eps=cfg.eps if algorithm.eps else None,
        config=cfg.sim_config(),
    )
    verdicts = (
        verify_result(
            instance, algorithm, result, cfg.eps if algorithm.eps else None
        )
        if cfg.verify
        else {}
    )
    assert result.report is not None  # nosec: B101
    report = Report(
        config=cfg.as_dict(),
        sim=result.report.as_dict(),
        outputs=describe(result),
        verdicts=verdicts,
        wall_time=timer.stop(),
    )
    LOGGER.info(
        "%s on %s took %d rounds and %.3f seconds",
        cfg.algorithm,
        cfg.source,
        result.report.rounds,
        report.wall_time,
    )
    return report


def json_block(data: Any) -> str:
    """Serialize plain data with sorted keys."""
    return json.dumps(to_jsonable(data), option=ORJSON_OPTIONS).decode("UTF-8")


def _text(value: Any) -> str:
    if value is None:
        return "inf"
    if isinstance(value, Fraction):
        return str(to_jsonable(value))
    return str(value)


def render_report(report: Report, *, timing: bool = False) -> str:
    """Render the key: value lines followed by the JSON block."""
    config, sim, outputs = report.config, report.sim, report.outputs
    lines = [
        f"schema_version: {REPORT_SCHEMA_VERSION}",
        f"algorithm: {config['algorithm']}",
        f"source: {config['source']}",
        f"seed: {config['seed']}",
        f"rounds: {sim['rounds']}",
        f"charged_rounds: {_text(sim['charged_rounds'])}",
        f"words_sent: {sim['words_sent']}",
        f"max_edge_load: {sim['max_edge_load']}",
    ]
    if "weights" in outputs:
        lines.append(f"sisp2: {_text(outputs['sisp2'])}")
        lines.append(
            "weights: " + " ".join(_text(value) for value in outputs["weights"])
        )
    else:
        lines.append(f"weight: {_text(outputs['weight'])}")
    for name, verdict in sorted(report.verdicts.items()):
        lines.append(f"verify.{name}: {'pass' if verdict else 'fail'}")
    if timing:
        lines.append(f"wall_time: {report.wall_time:.6f}")
    lines.append(f"status: {'pass' if report.passed else 'fail'}")
    block = json_block(report.as_dict(timing=timing))
    return "\n".join(lines) + "\n\n" + block + "\n"
