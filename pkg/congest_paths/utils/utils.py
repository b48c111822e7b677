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

"""Small helpers shared by the simulator, the harness and the CLI."""

from __future__ import annotations

import argparse
import bisect
import logging
import math
import pathlib
import random
import sys
import time
from base64 import b85encode
from collections.abc import Iterable
from fractions import Fraction
from typing import Any, Final

from blake3 import blake3
from rapidfuzz.distance.Levenshtein import distance
from typed_stream import Stream

LOGGER: Final = logging.getLogger(__name__)

TRUE_WORDS: Final = frozenset(
    {"1", "enabled", "on", "sure", "true", "y", "yes"}
)
FALSE_WORDS: Final = frozenset(
    {"0", "disabled", "false", "n", "no", "nope", "off"}
)


class ArgparseNamespace(argparse.Namespace):
    """The typed result of the generic argument parser."""

    # pylint: disable=too-few-public-methods
    __slots__ = ("config", "save_config_to")

    config: list[pathlib.Path]
    save_config_to: pathlib.Path | None


class Timer:
    """Measure the wall time since the timer was created."""

    __slots__ = ("_start",)

    def __init__(self) -> None:
        """Start the timer."""
        self._start = time.perf_counter()

    def stop(self) -> float:
        """Get the seconds since the start."""
        return time.perf_counter() - self._start


def bool_to_str(val: bool) -> str:
    """Convert a boolean to sure/nope."""
    return "sure" if val else "nope"


def bounded_edit_distance(first: str, second: str, /, limit: int) -> int:
    """Get the Levenshtein distance, but at most the limit."""
    return min(distance(first, second, score_cutoff=limit), limit)


def ceil_root(value: int, numerator: int, denominator: int) -> int:
    """Return ⌈value ** (numerator / denominator)⌉ computed exactly."""
    if value < 0 or numerator < 0 or denominator <= 0:
        raise ValueError(
            f"Invalid root: {value!r} ** ({numerator!r}/{denominator!r})"
        )
    power = value**numerator
    guess = math.ceil(power ** (1 / denominator)) if power else 0
    while guess and (guess - 1) ** denominator >= power:
        guess -= 1
    while guess**denominator < power:
        guess += 1
    return guess


def create_argument_parser() -> argparse.ArgumentParser:
    """Create the parser of the options every subcommand accepts."""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument(
        "-c",
        "--config",
        default=[pathlib.Path("config.ini")],
        help="the config files, later ones win",
        metavar="PATH",
        nargs="*",
        type=pathlib.Path,
    )
    parser.add_argument(
        "--save-config-to",
        default=None,
        help="write the effective configuration to a file",
        metavar="PATH",
        nargs="?",
        type=pathlib.Path,
    )
    return parser


def get_arguments_without_help() -> tuple[str, ...]:
    """Get the command line arguments without the help flags."""
    return tuple(arg for arg in sys.argv[1:] if arg not in {"-h", "--help"})


def get_close_matches(
    word: str,
    possibilities: Iterable[str],
    count: int = 3,
    cutoff: float = 0.5,
) -> tuple[str, ...]:
    """Get up to count names similar to word, the most similar first.

    The similarity is the edit distance divided by the length of the longer
    name; names with a higher ratio than cutoff are ignored. An empty word
    matches everything only with a cutoff of 1.
    """
    if count <= 0:
        raise ValueError(f"count must be > 0: {count}")
    if not 0.0 <= cutoff <= 1.0:
        raise ValueError(f"cutoff must be in [0.0, 1.0]: {cutoff}")
    word_len = len(word)
    if not word_len:
        if cutoff < 1.0:
            return ()
        return Stream(possibilities).limit(count).collect(tuple)
    ranked: list[tuple[float, str]] = []
    for name in possibilities:
        longest = max(word_len, len(name))
        limit = 1 + int(cutoff * longest)
        ratio = bounded_edit_distance(name, word, limit) / longest
        if ratio <= cutoff:
            bisect.insort(ranked, (ratio, name))
            del ranked[count:]
    return tuple(name for _, name in ranked)


def hash_bytes(*args: bytes, size: int = 32) -> str:
    """Hash bytes and return the Base85 representation."""
    hasher = blake3()
    for arg in args:
        hasher.update(arg)
    return b85encode(hasher.digest(size)).decode("ASCII")


def seeded_random(*parts: object) -> random.Random:
    """Create a random number generator seeded by hashing the parts."""
    hasher = blake3()
    for part in parts:
        hasher.update(repr(part).encode("UTF-8"))
        hasher.update(b"\0")
    return random.Random(  # nosec: B311
        int.from_bytes(hasher.digest(8), "big")
    )


def str_to_bool(val: None | str | bool, default: None | bool = None) -> bool:
    """Convert a string representation of truth to True or False."""
    if isinstance(val, bool):
        return val
    if isinstance(val, str):
        if (word := val.strip().lower()) in TRUE_WORDS:
            return True
        if word in FALSE_WORDS:
            return False
    if default is None:
        raise ValueError(f"Invalid bool value: {val!r}")
    return default


def str_to_fraction(string: str) -> Fraction:
    """Parse a positive ratio like 0.25 or 1/4 exactly."""
    try:
        value = Fraction(string.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"Invalid ratio: {string!r}") from exc
    if value <= 0:
        raise ValueError(f"Ratio must be positive: {string!r}")
    return value


def to_jsonable(value: Any) -> Any:
    """Convert fractions and tuples into values orjson can serialize."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return value.numerator
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict):
        return {str(key): to_jsonable(val) for key, val in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(val) for val in value]
    return value
