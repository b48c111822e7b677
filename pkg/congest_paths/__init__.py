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

"""Distributed replacement paths and minimum weight cycles in CONGEST."""

from __future__ import annotations

import sys
from importlib.metadata import Distribution
from importlib.resources import files
from importlib.resources.abc import Traversable
from pathlib import Path
from typing import Final

import orjson as json

try:
    from pytest_is_running import is_running as pytest_is_running
except ModuleNotFoundError:

    def pytest_is_running() -> bool:  # noqa: D103
        # pylint: disable=missing-function-docstring
        return "pytest" in sys.modules


DIR: Final[Traversable] = files(__name__)

NAME = "congest-paths"


def get_version() -> str:
    """Get the version of the package."""
    if isinstance(DIR, Path) and (DIR.parent / ".git").exists():
        # pylint: disable-next=import-outside-toplevel
        from get_version import get_version as gv

        return gv(__file__, vcs="git")

    try:
        return Distribution.from_name(NAME).version
    except ModuleNotFoundError:  # pragma: no cover
        return "0.0.0"


VERSION: Final[str] = get_version()

ORJSON_OPTIONS: Final[int] = (
    json.OPT_SERIALIZE_NUMPY | json.OPT_SORT_KEYS | json.OPT_INDENT_2
)

REPORT_SCHEMA_VERSION: Final[int] = 1

if pytest_is_running():
    NAME += "-test"
elif sys.flags.dev_mode:
    NAME += "-dev"

__all__ = (
    "DIR",
    "NAME",
    "ORJSON_OPTIONS",
    "REPORT_SCHEMA_VERSION",
    "VERSION",
    "pytest_is_running",
)

__version__ = VERSION
