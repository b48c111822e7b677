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

"""The tests for the utils module."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest

from congest_paths.utils import utils
from congest_paths.utils.better_config_parser import BetterConfigParser

from . import config


def test_bool_str_conversion() -> None:
    """Test the conversion from bool to str and from str to bool."""
    for boolean in (False, True):
        assert boolean is utils.str_to_bool(utils.bool_to_str(boolean))
        assert boolean is utils.str_to_bool(str(boolean))

    for boolean_str in ("sure", "nope"):
        boolean_bool = utils.str_to_bool(boolean_str)
        assert isinstance(boolean_bool, bool)
        assert boolean_str == utils.bool_to_str(boolean_bool)

    with pytest.raises(ValueError):
        utils.str_to_bool("Invalid bool value")

    assert utils.str_to_bool("Invalid bool value", True) is True


def test_get_close_matches() -> None:
    """Test the get_close_matches function."""
    assert utils.get_close_matches("a", ("a", "b"), cutoff=0) == ("a",)
    assert utils.get_close_matches("", ("a", "b"), cutoff=1.0) == ("a", "b")
    assert utils.get_close_matches("mwc-dri", ("mwc-dir", "ansc")) == (
        "mwc-dir",
    )
    assert utils.get_close_matches("xyz", ("rp-undir", "ansc")) == ()
    with pytest.raises(ValueError):
        utils.get_close_matches("a", ("a",), count=0)


def test_ceil_root() -> None:
    """Test the exact rounded up roots."""
    assert utils.ceil_root(16, 1, 2) == 4
    assert utils.ceil_root(17, 1, 2) == 5
    assert utils.ceil_root(1000, 2, 3) == 100
    assert utils.ceil_root(1001, 2, 3) == 101
    assert utils.ceil_root(0, 1, 4) == 0
    assert utils.ceil_root(10**30, 1, 2) == 10**15
    with pytest.raises(ValueError):
        utils.ceil_root(-1, 1, 2)


def test_str_to_fraction() -> None:
    """Test parsing ratios."""
    assert utils.str_to_fraction("1/4") == Fraction(1, 4)
    assert utils.str_to_fraction(" 0.25 ") == Fraction(1, 4)
    for text in ("0", "-1/2", "1/0", "quarter"):
        with pytest.raises(ValueError):
            utils.str_to_fraction(text)


def test_hashing() -> None:
    """Test the hashes and the seeded generators."""
    assert utils.hash_bytes(b"a", b"b") == utils.hash_bytes(b"ab")
    assert utils.hash_bytes(b"a") != utils.hash_bytes(b"b")
    assert len(utils.hash_bytes(b"a", size=8)) == 10
    first = utils.seeded_random("path", 3).random()
    assert first == utils.seeded_random("path", 3).random()
    assert first != utils.seeded_random("path", 4).random()


def test_to_jsonable() -> None:
    """Test the conversion of fractions and tuples."""
    assert utils.to_jsonable(Fraction(4, 2)) == 2
    assert utils.to_jsonable(Fraction(1, 3)) == "1/3"
    data = {1: (Fraction(1, 2), None)}
    assert utils.to_jsonable(data) == {"1": ["1/2", None]}


def test_timer() -> None:
    """Test that the timer does not run backwards."""
    assert utils.Timer().stop() >= 0


def test_config_parser(tmp_path: Path) -> None:
    """Test the typed getters and the fallbacks."""
    parser = config()
    assert parser.getint("GENERAL", "SEED") == 7
    assert parser.getboolean("SIMULATOR", "VIRTUAL_TIME")
    assert parser.getfloat("CHARGING", "SSSP_FACTOR") == 1.5
    assert parser.getfraction("EXPERIMENT", "EPS") == Fraction(1, 2)
    assert parser.get("LOGGING", "PATH", fallback=None) is None
    assert parser.getint("SIMULATOR", "MISSING", fallback=3) == 3
    ratio = Fraction(2, 3)
    assert parser.getfraction("NEW", "RATIO", fallback=ratio) == ratio
    dumped = tmp_path / "config.ini"
    parser.dump(dumped)
    reloaded = BetterConfigParser.from_path(dumped)
    assert reloaded.getint("SIMULATOR", "MISSING") == 3
    assert reloaded.getfraction("NEW", "RATIO") == ratio
    assert reloaded.getint("GENERAL", "SEED") == 7


def test_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    """Test that the environment is used when the file has no value."""
    env = "CONGEST_PATHS_TEST_VALUE"
    monkeypatch.setenv(env, "12")
    parser = BetterConfigParser()
    assert parser.getint("SIMULATOR", "VALUE", fallback=1, env=env) == 12
    assert config().getint("GENERAL", "SEED", fallback=1, env=env) == 7


if __name__ == "__main__":
    test_bool_str_conversion()
    test_get_close_matches()
    test_ceil_root()
    test_str_to_fraction()
    test_hashing()
    test_to_jsonable()
    test_timer()
