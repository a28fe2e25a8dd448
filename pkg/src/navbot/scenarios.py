"""Test environments: cluttered course, single-opening enclosure, dead-end
corner pocket and a room with a scripted crossing obstacle."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .world import MobileObstacle, Pose, WorldSpec

SCENARIOS = ("course", "enclosure", "corner", "mobile")
ROOM = (0.0, 0.0, 400.0, 400.0)
WALL = 5.0

Region = Tuple[float, float, float, float]


class UnknownScenario(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    name: str
    world: WorldSpec
    start: Pose
    exit_region: Optional[Region] = None
    max_ticks: int = 2000


def _rect(x0, y0, x1, y1):
    return ((x0, y0), (x1, y0), (x1, y1), (x0, y1))


def _regular(cx, cy, radius, sides, phase):
    return tuple((cx + radius * math.cos(phase + 2 * math.pi * k / sides),
                  cy + radius * math.sin(phase + 2 * math.pi * k / sides)) for k in range(sides))


def _rotated_rect(cx, cy, w, h, angle):
    c, s = math.cos(angle), math.sin(angle)
    return tuple((cx + c * x - s * y, cy + s * x + c * y)
                 for x, y in ((-w / 2, -h / 2), (w / 2, -h / 2), (w / 2, h / 2), (-w / 2, h / 2)))


def chamfers(box, leg: float):
    """Triangles filling the four inside corners of an axis-aligned box.

    A square corner leaves the threshold teacher with front and both sides
    blocked, which it answers with an endless back/front cycle.
    """
    x0, y0, x1, y1 = box
    return (((x0, y0), (x0 + leg, y0), (x0, y0 + leg)),
            ((x1, y0), (x1, y0 + leg), (x1 - leg, y0)),
            ((x1, y1), (x1 - leg, y1), (x1, y1 - leg)),
            ((x0, y1), (x0, y1 - leg), (x0 + leg, y1)))


def course(seed: int, gap: float = 50.0, wall_gap: float = 50.0, chamfer: float = 40.0) -> Scenario:
    """6-10 seeded convex obstacles in a 400x400 cm room with chamfered corners.

    Bounding circles keep ``gap`` cm between obstacles and ``wall_gap`` cm to
    the walls so every passage is wider than the robot plus its threshold.
    """
    rng = np.random.default_rng(seed)
    start = Pose(50.0, 50.0, 0.0)
    n = int(rng.integers(6, 11))
    placed = []
    polys = []
    tries = 0
    while len(polys) < n:
        tries += 1
        if tries % 5000 == 0:
            placed, polys = [], []
        if rng.random() < 0.5:
            w, h = rng.uniform(20, 40, size=2)
            radius = math.hypot(w, h) / 2
            make = lambda cx, cy, w=w, h=h, a=rng.uniform(0, math.pi): _rotated_rect(cx, cy, w, h, a)
        else:
            radius = rng.uniform(12, 22)
            sides = int(rng.integers(5, 9))
            make = lambda cx, cy, r=radius, k=sides, a=rng.uniform(0, math.pi): _regular(cx, cy, r, k, a)
        lo = ROOM[0] + wall_gap + radius
        hi = ROOM[2] - wall_gap - radius
        if lo >= hi:
            continue
        cx, cy = rng.uniform(lo, hi, size=2)
        if math.hypot(cx - start.x, cy - start.y) < radius + 60:
            continue
        if any(math.hypot(cx - px, cy - py) < radius + pr + gap for px, py, pr in placed):
            continue
        placed.append((cx, cy, radius))
        polys.append(make(cx, cy))
    walls = chamfers(ROOM, chamfer) if chamfer > 0 else ()
    return Scenario("course", WorldSpec(ROOM, tuple(polys) + walls), start, None, 2000)


def enclosure(seed: int, inner: float = 120.0, opening: float = 40.0, chamfer: float = 25.0) -> Scenario:
    """A 120x120 cm box with one 40 cm gap in its top wall and chamfered
    inside corners; exit is above the box."""
    rng = np.random.default_rng(seed)
    x0 = (ROOM[2] - inner) / 2
    y0 = (ROOM[3] - inner) / 2
    x1, y1 = x0 + inner, y0 + inner
    gap_lo = x0 + (inner - opening) / 2
    gap_hi = gap_lo + opening
    walls = (
        _rect(x0 - WALL, y0 - WALL, x1 + WALL, y0),
        _rect(x0 - WALL, y0, x0, y1),
        _rect(x1, y0, x1 + WALL, y1),
        _rect(x0 - WALL, y1, gap_lo, y1 + WALL),
        _rect(gap_hi, y1, x1 + WALL, y1 + WALL),
    )
    if chamfer > 0:
        walls += chamfers((x0, y0, x1, y1), chamfer)
    start = Pose((x0 + x1) / 2, (y0 + y1) / 2, float(rng.uniform(0, 2 * math.pi)))
    exit_region = (ROOM[0], y1 + WALL + 20.0, ROOM[2], ROOM[3])
    return Scenario("enclosure", WorldSpec(ROOM, walls), start, exit_region, 4000)


def _slab(p, q, thickness=WALL):
    """Wall of the given thickness on the left of the directed segment p -> q."""
    dx, dy = q[0] - p[0], q[1] - p[1]
    n = math.hypot(dx, dy)
    nx, ny = -dy / n * thickness, dx / n * thickness
    return (p, q, (q[0] + nx, q[1] + ny), (p[0] + nx, p[1] + ny))


def corner(seed: int, width: float = 54.0, flare_deg: float = 34.0, length: float = 110.0) -> Scenario:
    """Dead-end pocket: a flat back wall ``width`` cm across with two side walls
    flaring outwards by ``flare_deg`` towards the mouth.

    The robot starts on the pocket axis facing the back wall, so left and right
    clearances are mirror images. Exit is outside the pocket mouth.
    """
    back_x, cy = 300.0, ROOM[3] / 2
    half = width / 2
    phi = math.radians(flare_deg)
    upper, lower = (back_x, cy + half), (back_x, cy - half)
    upper_tip = (back_x - length * math.cos(phi), cy + half + length * math.sin(phi))
    lower_tip = (back_x - length * math.cos(phi), cy - half - length * math.sin(phi))
    walls = (_slab(lower, upper), _slab(upper, upper_tip), _slab(lower_tip, lower))
    start = Pose(back_x - 80.0, cy, 0.0)
    exit_region = (ROOM[0], ROOM[1], upper_tip[0] - 20.0, ROOM[3])
    return Scenario("corner", WorldSpec(ROOM, walls), start, exit_region, 2000)


def mobile(seed: int) -> Scenario:
    """Open room; a box sweeps across the robot's path and stops 1.5-4 cm
    short of the front sensor's line of travel.

    The crossing tick and standoff assume the robot drives straight from the
    start with the default two-tick planner delay (first motion on tick 2).
    """
    rng = np.random.default_rng(seed)
    start = Pose(60.0, 200.0, 0.0)
    cross_tick = int(rng.integers(60, 140))
    standoff = float(rng.uniform(1.5, 4.0))
    speed = float(rng.uniform(80.0, 120.0))
    dt, v_robot, radius = 0.05, 20.0, 12.0
    rim_x = start.x + radius + v_robot * dt * (cross_tick - 2)
    face = rim_x + standoff
    w, h = 30.0, 40.0
    # lower edge sits 1 cm past the robot's axis at cross_tick
    y_low = start.y - 1.0 + speed * dt * cross_tick
    verts = _rect(face, y_low, face + w, y_low + h)
    cx = face + w / 2
    waypoints = ((cx, 30.0),)
    obstacle = MobileObstacle(verts, waypoints, speed, loop=False)
    bounds = (ROOM[0], ROOM[1], ROOM[2], max(ROOM[3], y_low + h + 10.0))
    return Scenario("mobile", WorldSpec(bounds, (), (obstacle,)), start, None, cross_tick + 200)


def build_scenario(name: str, seed: int = 0) -> Scenario:
    builders = {"course": course, "enclosure": enclosure, "corner": corner, "mobile": mobile}
    if name not in builders:
        raise UnknownScenario(f"unknown scenario {name!r}; expected one of {SCENARIOS}")
    return builders[name](seed)
