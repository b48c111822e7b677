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

"""Measure how the rounds of an algorithm grow with the graph size."""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Final

import numpy as np

from ..congest.simulator import SimConfig
from ..errors import UsageError
from .registry import get_algorithm
from .sources import load_instance

LOGGER: Final = logging.getLogger(__name__)

MIN_SEEDS: Final[int] = 5
DEFAULT_DEGREE: Final[float] = 4.0


@dataclass(frozen=True, slots=True)
class BenchRow:
    """The median rounds measured for one size."""

    n: int
    rounds: float
    samples: tuple[int, ...]


@dataclass(frozen=True, slots=True)
class BenchTable:
    """The measured rounds per size and the fitted log-log slope."""

    algorithm: str
    rows: tuple[BenchRow, ...]
    slope: float | None

    def as_dict(self) -> dict[str, Any]:
        """Convert the table to plain data."""
        return {
            "algorithm": self.algorithm,
            "rows": [
                {"n": row.n, "rounds": row.rounds, "samples": row.samples}
                for row in self.rows
            ],
            "slope": self.slope,
        }

    def render(self) -> str:
        """Render the table as aligned text."""
        lines = [f"algorithm: {self.algorithm}", "n rounds"]
        lines.extend(f"{row.n} {row.rounds:g}" for row in self.rows)
        lines.append(
            "slope: -" if self.slope is None else f"slope: {self.slope:.4f}"
        )
        return "\n".join(lines) + "\n"


def fit_slope(sizes: Sequence[int], rounds: Sequence[float]) -> float | None:
    """Fit log(rounds) = a·log(n) + b by least squares and return a."""
    if len(sizes) < 2:
        return None
    x = np.log(np.asarray(sizes, dtype=np.float64))
    y = np.log(np.maximum(np.asarray(rounds, dtype=np.float64), 1.0))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def bench_source(  # pylint: disable=too-many-arguments
    n: int,
    seed: int,
    *,
    degree: float,
    directed: bool,
    weighted: bool,
    hst: int | None,
) -> str:
    """The random graph source of one measurement."""
    parts = [
        f"n={n}",
        f"p={min(1.0, degree / max(n - 1, 1)):.6f}",
        f"seed={seed}",
        f"directed={'sure' if directed else 'nope'}",
        f"weighted={'sure' if weighted else 'nope'}",
    ]
    if hst is not None:
        parts.append(f"hst={hst}")
    return "random:" + ",".join(parts)


def measure(
    algorithm: str,
    source: str,
    eps: Fraction | None,
    config: SimConfig,
) -> int:
    """Run the algorithm once and return its rounds."""
    algo = get_algorithm(algorithm)
    instance = load_instance(source)
    result = algo.run(instance.graph, instance.path, eps=eps, config=config)
    assert result.report is not None  # nosec: B101
    LOGGER.debug(
        "%s on %s: %d rounds", algorithm, source, result.report.rounds
    )
    return result.report.rounds


def _starmap[T](
    function: Callable[..., T], jobs: Iterable[tuple[Any, ...]], parallel: int
) -> list[T]:
    pending = list(jobs)
    if parallel <= 1 or len(pending) < 2:
        return [function(*job) for job in pending]
    with ProcessPoolExecutor(max_workers=parallel) as executor:
        return list(executor.map(function, *zip(*pending, strict=True)))


def cmd_bench(  # pylint: disable=too-many-arguments
    algorithm: str,
    sizes: Sequence[int],
    seeds: Sequence[int],
    *,
    degree: float = DEFAULT_DEGREE,
    hst: int | None = None,
    eps: Fraction | None = None,
    weighted: bool | None = None,
    config: SimConfig | None = None,
    parallel: int = 1,
) -> BenchTable:
    """Measure the median rounds per size and fit the scaling exponent."""
    algo = get_algorithm(algorithm)
    if not sizes:
        raise UsageError("At least one size is needed")
    if list(sizes) != sorted(set(sizes)):
        raise UsageError(f"The sizes must be ascending: {list(sizes)!r}")
    if not seeds:
        raise UsageError("At least one seed is needed")
    if len(seeds) < MIN_SEEDS:
        LOGGER.warning(
            "Only %d seeds per size, the medians may be noisy", len(seeds)
        )
    if algo.eps and eps is None:
        raise UsageError(f"{algorithm!r} needs --eps")
    config = config or SimConfig()
    directed = bool(algo.directed)
    weighted = bool(algo.weighted if weighted is None else weighted)
    if algo.weighted is not None and weighted != algo.weighted:
        raise UsageError(f"{algorithm!r} does not run on this graph class")
    jobs = [
        (
            algorithm,
            bench_source(
                n,
                seed,
                degree=degree,
                directed=directed,
                weighted=weighted,
                hst=hst,
            ),
            eps if algo.eps else None,
            config,
        )
        for n in sizes
        for seed in seeds
    ]
    measured = _starmap(measure, jobs, parallel)
    rows = []
    for i, n in enumerate(sizes):
        samples = tuple(measured[i * len(seeds) : (i + 1) * len(seeds)])
        rows.append(BenchRow(n, float(np.median(samples)), samples))
        LOGGER.info("n=%d: median of %g rounds", n, rows[-1].rounds)
    return BenchTable(
        algorithm,
        tuple(rows),
        fit_slope([row.n for row in rows], [row.rounds for row in rows]),
    )
