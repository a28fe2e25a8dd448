"""Wire format between the microcontroller and the planner host.

Upstream: one ASCII line per scan, ``front,back,left,right\\n`` with two
fraction digits. Downstream: a single command byte (``f b l r s``).
"""
from __future__ import annotations

import math
import re
from collections import deque
from typing import Any, Optional

from .types import SENSOR_MAX_RANGE, SENSOR_MIN_RANGE, Command, ScanVector

MALFORMED = "malformed"
FIELD_COUNT = "field_count"
RANGE = "range"
UNKNOWN_COMMAND = "unknown_command"

_NUMBER = re.compile(rb"[+-]?(\d+(\.\d*)?|\.\d+)")


class FrameError(ValueError):
    def __init__(self, kind: str, detail: str = ""):
        super().__init__(f"{kind}: {detail}" if detail else kind)
        self.kind = kind


def encode_scan(scan: ScanVector) -> bytes:
    return (",".join(f"{v:.2f}" for v in scan) + "\n").encode("ascii")


def decode_scan(data: bytes) -> ScanVector:
    if not isinstance(data, (bytes, bytearray)):
        raise FrameError(MALFORMED, "frame must be bytes")
    if not data.endswith(b"\n"):
        raise FrameError(MALFORMED, "missing newline terminator")
    fields = bytes(data[:-1]).split(b",")
    if any(not _NUMBER.fullmatch(f) for f in fields):
        raise FrameError(MALFORMED, f"non-numeric field in {bytes(data)!r}")
    if len(fields) != 4:
        raise FrameError(FIELD_COUNT, f"expected 4 fields, got {len(fields)}")
    values = [float(f) for f in fields]
    for v in values:
        if not (math.isfinite(v) and SENSOR_MIN_RANGE <= v <= SENSOR_MAX_RANGE):
            raise FrameError(RANGE, f"{v} outside [{SENSOR_MIN_RANGE}, {SENSOR_MAX_RANGE}]")
    return ScanVector(*values)


_BYTE_TO_COMMAND = {c.byte: c for c in Command}


def encode_command(cmd: Command) -> bytes:
    return Command(cmd).byte


def decode_command(data: bytes) -> Command:
    try:
        return _BYTE_TO_COMMAND[bytes(data)]
    except (KeyError, TypeError):
        raise FrameError(UNKNOWN_COMMAND, repr(data)) from None


class DelayChannel:
    """FIFO link that releases each message exactly ``delay_ticks`` after sending.

    Ticks passed to ``send`` and ``poll`` must be non-decreasing.
    """

    def __init__(self, delay_ticks: int = 0):
        if delay_ticks < 0:
            raise ValueError("delay_ticks must be >= 0")
        self.delay_ticks = delay_ticks
        self._queue: deque = deque()
        self._last_tick = -1

    def _check_tick(self, tick: int) -> None:
        if tick < self._last_tick:
            raise ValueError(f"tick went backwards: {tick} < {self._last_tick}")
        self._last_tick = tick

    def send(self, tick: int, msg: Any) -> None:
        self._check_tick(tick)
        self._queue.append((tick + self.delay_ticks, msg))

    def poll(self, tick: int) -> Optional[Any]:
        self._check_tick(tick)
        if self._queue and self._queue[0][0] <= tick:
            return self._queue.popleft()[1]
        return None

    def clear(self) -> None:
        self._queue.clear()

    def __len__(self) -> int:
        return len(self._queue)


def channel_send(ch: DelayChannel, tick: int, msg: Any) -> None:
    ch.send(tick, msg)


def channel_poll(ch: DelayChannel, tick: int) -> Optional[Any]:
    return ch.poll(tick)
