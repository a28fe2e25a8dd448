"""Value types shared across the stack: motion commands and four-channel scans."""
from __future__ import annotations

import enum
from typing import NamedTuple

import numpy as np

SENSOR_MIN_RANGE = 5.0
SENSOR_MAX_RANGE = 450.0
CHANNELS = ("front", "back", "left", "right")


class Command(enum.IntEnum):
    """Move instruction. Integer order doubles as the tie-break order."""

    FRONT = 0
    BACK = 1
    LEFT = 2
    RIGHT = 3
    STOP = 4

    @property
    def label(self) -> str:
        return self.name.lower()

    @property
    def byte(self) -> bytes:
        return self.label[0].encode("ascii")

    @classmethod
    def from_label(cls, label: str) -> "Command":
        try:
            return cls[label.upper()]
        except KeyError:
            raise ValueError(f"unknown command label {label!r}") from None


N_COMMANDS = len(Command)
TURNS = frozenset((Command.LEFT, Command.RIGHT))


class ScanVector(NamedTuple):
    """Distances in cm, channel order front, back, left, right."""

    front: float
    back: float
    left: float
    right: float

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=np.float64)

    def in_envelope(self) -> bool:
        return all(SENSOR_MIN_RANGE <= v <= SENSOR_MAX_RANGE for v in self)
