"""Ultrasonic ranging: ray casts against world geometry, a three-ray beam cone
per sensor, seeded additive noise and the 5-450 cm reporting envelope."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _geometry
from .types import CHANNELS, SENSOR_MAX_RANGE, SENSOR_MIN_RANGE, ScanVector
from .world import Pose, RobotSpec, WorldSpec, all_segments

CONE_OFFSETS = np.radians([-7.5, 0.0, 7.5])


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")


def clamp_range(d: float, max_range: float = SENSOR_MAX_RANGE) -> float:
    return min(max(d, SENSOR_MIN_RANGE), max_range)


def raycast(world: WorldSpec, origin, bearing: float, max_range: float = SENSOR_MAX_RANGE) -> float:
    """Clamped distance along one ray to the first obstacle edge or wall."""
    o = np.array([origin], dtype=np.float64)
    d = np.array([[math.cos(bearing), math.sin(bearing)]])
    hit = _geometry.cast_rays(all_segments(world), o, d, float(max_range))[0]
    return clamp_range(float(hit), max_range)


def beam_rays(pose: Pose, robot: RobotSpec):
    """Origins and unit directions of the 12 cone rays, sensor-major in channel order."""
    origins = np.empty((4 * len(CONE_OFFSETS), 2))
    dirs = np.empty_like(origins)
    for i, name in enumerate(CHANNELS):
        m = robot.sensor_mounts[name]
        a = pose.heading + m.bearing
        ox = pose.x + m.offset * math.cos(a)
        oy = pose.y + m.offset * math.sin(a)
        rows = slice(3 * i, 3 * i + 3)
        origins[rows] = (ox, oy)
        dirs[rows, 0] = np.cos(a + CONE_OFFSETS)
        dirs[rows, 1] = np.sin(a + CONE_OFFSETS)
    return origins, dirs


def noise_draw(noise: NoiseSpec, tick: int) -> np.ndarray:
    """Perturbations for the four channels at ``tick``; replayable from (seed, tick)."""
    if noise.sigma == 0.0:
        return np.zeros(4)
    rng = np.random.default_rng([int(noise.seed), int(tick)])
    return rng.normal(0.0, noise.sigma, size=4)


def sense(world: WorldSpec, pose: Pose, robot: RobotSpec, noise: NoiseSpec, tick: int,
          max_range: float = SENSOR_MAX_RANGE) -> ScanVector:
    origins, dirs = beam_rays(pose, robot)
    hits = _geometry.cast_rays(all_segments(world), origins, dirs, float(max_range))
    beam_min = hits.reshape(4, len(CONE_OFFSETS)).min(axis=1)
    readings = np.clip(beam_min + noise_draw(noise, tick), SENSOR_MIN_RANGE, max_range)
    return ScanVector(*(float(v) for v in readings))
