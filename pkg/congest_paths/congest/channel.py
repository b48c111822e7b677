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

"""The framing layer that splits long messages into words."""

from __future__ import annotations

import heapq
import math
from collections.abc import Hashable
from typing import Final

type Fields = tuple[int, ...]

_EMPTY: Final[tuple[()]] = ()


def word_size(fields: Fields) -> int:
    """Count the bits needed to encode the fields of a message."""
    return sum(
        max(1, abs(field).bit_length()) + (field < 0) for field in fields
    )


class _Entry:
    """A queued message."""

    # pylint: disable=too-few-public-methods
    __slots__ = ("alive", "fields", "frames", "key")

    def __init__(
        self, fields: Fields, frames: int, key: Hashable | None
    ) -> None:
        self.alive = True
        self.fields = fields
        self.frames = frames
        self.key = key


class Channel:
    """The outgoing queue of one directed link.

    Messages leave in priority order, each one occupying the link for
    ⌈bits/B⌉ consecutive rounds. A message that is already being transmitted
    is never interrupted by a message with a higher priority. Posting with a
    key replaces a queued message with the same key.
    """

    __slots__ = ("_heap", "_in_flight", "_keyed", "_seq", "word_bits")

    def __init__(self, word_bits: int) -> None:
        """Create an empty channel."""
        self.word_bits = word_bits
        self._heap: list[tuple[tuple[int, ...], int, _Entry]] = []
        self._keyed: dict[Hashable, _Entry] = {}
        self._in_flight: _Entry | None = None
        self._seq = 0

    def __len__(self) -> int:
        """Return the number of messages not yet delivered."""
        return sum(entry.alive for *_, entry in self._heap) + (
            self._in_flight is not None
        )

    @property
    def idle(self) -> bool:
        """Whether nothing is queued or in transmission."""
        if self._in_flight is not None:
            return False
        while self._heap and not self._heap[0][2].alive:
            heapq.heappop(self._heap)
        return not self._heap

    def post(
        self,
        fields: Fields,
        priority: tuple[int, ...] = _EMPTY,
        key: Hashable | None = None,
    ) -> int:
        """Queue a message and return the number of frames it needs."""
        frames = max(1, math.ceil(word_size(fields) / self.word_bits))
        entry = _Entry(fields, frames, key)
        if key is not None:
            if (old := self._keyed.get(key)) is not None:
                old.alive = False
            self._keyed[key] = entry
        heapq.heappush(self._heap, (priority, self._seq, entry))
        self._seq += 1
        return frames

    def transmit(self) -> tuple[bool, Fields | None]:
        """Send one frame.

        Returns whether a frame was sent and the fields of the message if
        that was its last frame.
        """
        entry = self._in_flight
        while entry is None and self._heap:
            _, _, candidate = heapq.heappop(self._heap)
            if candidate.alive:
                entry = self._in_flight = candidate
                if self._keyed.get(candidate.key) is candidate:
                    del self._keyed[candidate.key]
        if entry is None:
            return False, None
        entry.frames -= 1
        if entry.frames:
            return True, None
        self._in_flight = None
        return True, entry.fields
