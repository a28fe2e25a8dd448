"""Microcontroller-side rules: the threshold teacher used while collecting data
and the critical-distance reflex that bypasses the planner."""
from __future__ import annotations

from dataclasses import dataclass

from .types import SENSOR_MAX_RANGE, SENSOR_MIN_RANGE, Command, ScanVector


@dataclass(frozen=True)
class Thresholds:
    threshold: float = 20.0
    critical: float = 5.0

    def __post_init__(self):
        if not (0 < self.critical < self.threshold <= SENSOR_MAX_RANGE):
            raise ValueError(f"need 0 < critical < threshold <= {SENSOR_MAX_RANGE}")


def _below_critical(v: float, th: Thresholds) -> bool:
    # A reading pinned at the sensor floor hides any true distance under it.
    return v < th.critical or (v <= SENSOR_MIN_RANGE and th.critical >= SENSOR_MIN_RANGE)


def is_critical(scan: ScanVector, th: Thresholds) -> bool:
    return any(_below_critical(v, th) for v in scan)


def critical_reflex(scan: ScanVector, th: Thresholds) -> Command:
    assert is_critical(scan, th), "critical_reflex called on a non-critical scan"
    front, back, left, right = (_below_critical(v, th) for v in scan)
    if front:
        return Command.BACK
    if back:
        return Command.FRONT
    if left and right:
        return Command.BACK
    return Command.RIGHT if left else Command.LEFT


def teacher_decide(scan: ScanVector, th: Thresholds) -> Command:
    if scan.front > th.threshold:
        return Command.FRONT
    if max(scan.left, scan.right) > th.threshold:
        return Command.LEFT if scan.left >= scan.right else Command.RIGHT
    if scan.back > th.threshold:
        return Command.BACK
    return Command.STOP


def arduino_decide(scan: ScanVector, th: Thresholds) -> Command:
    """The full on-board policy: reflex when critical, teacher otherwise."""
    if is_critical(scan, th):
        return critical_reflex(scan, th)
    return teacher_decide(scan, th)
