"""Deterministic 2D world: geometry, differential-drive kinematics, scripted
mobile obstacles and disc/polygon collision checks.

Units are centimetres, seconds and radians. Heading is measured
counter-clockwise from +x.
"""
from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Optional, Sequence, Tuple

import numpy as np

from . import _geometry
from .types import Command

TWO_PI = 2.0 * math.pi

Point = Tuple[float, float]
Polygon = Tuple[Point, ...]


class WorldError(ValueError):
    """Invalid world description."""


def normalize_heading(h: float) -> float:
    h = math.fmod(h, TWO_PI)
    if h < 0.0:
        h += TWO_PI
    if h >= TWO_PI:
        h = 0.0
    return h


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    heading: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.heading)):
            raise WorldError(f"non-finite pose {self!r}")
        object.__setattr__(self, "heading", normalize_heading(self.heading))


@dataclass(frozen=True)
class Mount:
    offset: float
    bearing: float


def default_mounts(body_radius: float = 12.0) -> dict:
    q = math.pi / 4.0
    return {
        "front": Mount(body_radius, 0.0),
        "back": Mount(body_radius, math.pi),
        "left": Mount(body_radius, q),
        "right": Mount(body_radius, -q),
    }


@dataclass(frozen=True)
class RobotSpec:
    body_radius: float = 12.0
    linear_speed: float = 20.0
    angular_speed: float = math.pi / 2.0
    sensor_mounts: Mapping[str, Mount] = field(default_factory=default_mounts)

    def __post_init__(self):
        if self.body_radius <= 0 or self.linear_speed <= 0 or self.angular_speed <= 0:
            raise WorldError("robot radius and speeds must be positive")
        if set(self.sensor_mounts) != {"front", "back", "left", "right"}:
            raise WorldError("robot needs exactly the mounts front, back, left, right")

    def __hash__(self):
        return hash((self.body_radius, self.linear_speed, self.angular_speed,
                     tuple(sorted(self.sensor_mounts.items()))))


def step_kinematics(pose: Pose, command: Command, robot: RobotSpec, dt: float) -> Pose:
    """Integrate one velocity command for ``dt`` seconds.

    Turns rotate in place; position is left bit-identical.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if command is Command.STOP:
        return pose
    if command is Command.LEFT or command is Command.RIGHT:
        sign = 1.0 if command is Command.LEFT else -1.0
        return Pose(pose.x, pose.y, pose.heading + sign * robot.angular_speed * dt)
    sign = 1.0 if command is Command.FRONT else -1.0
    dist = sign * robot.linear_speed * dt
    return Pose(pose.x + dist * math.cos(pose.heading),
                pose.y + dist * math.sin(pose.heading),
                pose.heading)


def _polygon_area(poly: Sequence[Point]) -> float:
    a = 0.0
    n = len(poly)
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        a += x0 * y1 - x1 * y0
    return 0.5 * a


def _is_convex(poly: Sequence[Point]) -> bool:
    sign = 0
    n = len(poly)
    for i in range(n):
        ax, ay = poly[i]
        bx, by = poly[(i + 1) % n]
        cx, cy = poly[(i + 2) % n]
        cross = (bx - ax) * (cy - by) - (by - ay) * (cx - bx)
        if cross != 0.0:
            s = 1 if cross > 0 else -1
            if sign and s != sign:
                return False
            sign = s
    return True


def _as_polygon(vertices) -> Polygon:
    return tuple((float(x), float(y)) for x, y in vertices)


@dataclass(frozen=True)
class MobileObstacle:
    """Convex polygon translated along a waypoint script at constant speed.

    The reference point is the vertex mean; ``waypoints`` are successive targets
    for it. A looping script returns to the start position after the last
    waypoint and repeats. ``elapsed`` is absolute script time in seconds.
    """

    vertices: Polygon
    waypoints: Tuple[Point, ...]
    speed: float
    loop: bool = True
    elapsed: float = 0.0

    @property
    def start(self) -> Point:
        xs, ys = zip(*self.vertices)
        return (sum(xs) / len(xs), sum(ys) / len(ys))

    def _path(self) -> list:
        pts = [self.start, *self.waypoints]
        if self.loop:
            pts.append(self.start)
        return pts

    def cycle_length(self) -> float:
        pts = self._path()
        return sum(math.dist(a, b) for a, b in zip(pts, pts[1:]))

    def offset_at(self, t: float) -> Point:
        pts = self._path()
        total = self.cycle_length()
        s = self.speed * t
        if total == 0.0:
            return (0.0, 0.0)
        if self.loop:
            s = math.fmod(s, total)
        sx, sy = pts[0]
        for a, b in zip(pts, pts[1:]):
            seg = math.dist(a, b)
            if s <= seg:
                f = 0.0 if seg == 0.0 else s / seg
                return (a[0] + f * (b[0] - a[0]) - sx, a[1] + f * (b[1] - a[1]) - sy)
            s -= seg
        return (pts[-1][0] - sx, pts[-1][1] - sy)

    def current_vertices(self) -> Polygon:
        dx, dy = self.offset_at(self.elapsed)
        return tuple((x + dx, y + dy) for x, y in self.vertices)


@dataclass(frozen=True)
class WorldSpec:
    bounds: Tuple[float, float, float, float]
    static_obstacles: Tuple[Polygon, ...] = ()
    mobile_obstacles: Tuple[MobileObstacle, ...] = ()

    def __post_init__(self):
        xmin, ymin, xmax, ymax = self.bounds
        if not (xmax > xmin and ymax > ymin):
            raise WorldError(f"degenerate bounds {self.bounds}")
        for poly in (*self.static_obstacles, *(m.vertices for m in self.mobile_obstacles)):
            if len(poly) < 3 or abs(_polygon_area(poly)) <= 0.0:
                raise WorldError(f"degenerate polygon {poly}")
            if not _is_convex(poly):
                raise WorldError(f"polygon is not convex: {poly}")
            for x, y in poly:
                if not (xmin <= x <= xmax and ymin <= y <= ymax):
                    raise WorldError(f"vertex ({x}, {y}) outside bounds")
        for m in self.mobile_obstacles:
            if not m.waypoints or m.speed <= 0:
                raise WorldError("mobile obstacle scripts need >= 1 waypoint and speed > 0")

    def polygons(self) -> Tuple[Polygon, ...]:
        """Every obstacle polygon at the world's current script time."""
        return self.static_obstacles + tuple(m.current_vertices() for m in self.mobile_obstacles)


def advance_obstacles(world: WorldSpec, sim_time: float) -> WorldSpec:
    """Place every mobile obstacle at absolute script time ``sim_time``."""
    if sim_time < 0:
        raise ValueError("sim_time must be non-negative")
    if not world.mobile_obstacles:
        return world
    return replace(world, mobile_obstacles=tuple(replace(m, elapsed=float(sim_time))
                                                  for m in world.mobile_obstacles))


def _polygon_segments(poly: Polygon) -> list:
    return [(*poly[i], *poly[(i + 1) % len(poly)]) for i in range(len(poly))]


@functools.lru_cache(maxsize=512)
def obstacle_segments(world: WorldSpec) -> np.ndarray:
    rows = [s for poly in world.polygons() for s in _polygon_segments(poly)]
    return np.array(rows, dtype=np.float64).reshape(-1, 4)


@functools.lru_cache(maxsize=512)
def all_segments(world: WorldSpec) -> np.ndarray:
    """Obstacle edges plus the four bounding walls, packed for the kernels."""
    xmin, ymin, xmax, ymax = world.bounds
    box = ((xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax))
    walls = np.array(_polygon_segments(box), dtype=np.float64)
    return np.vstack([obstacle_segments(world), walls])


def _inside_polygon(poly: Polygon, x: float, y: float) -> bool:
    inside = False
    n = len(poly)
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        if (y0 > y) != (y1 > y):
            xc = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
            if x < xc:
                inside = not inside
    return inside


def clearance(world: WorldSpec, x: float, y: float) -> float:
    """Distance from (x, y) to the nearest obstacle or wall; 0 when inside an obstacle."""
    xmin, ymin, xmax, ymax = world.bounds
    wall = min(x - xmin, xmax - x, y - ymin, ymax - y)
    if wall <= 0.0:
        return 0.0
    for poly in world.polygons():
        if _inside_polygon(poly, x, y):
            return 0.0
    segs = obstacle_segments(world)
    return min(wall, float(_geometry.min_clearance(segs, float(x), float(y))))


def collides(world: WorldSpec, pose: Pose, body_radius: float) -> bool:
    """True when the robot disc touches an obstacle or the bounds (closed contact)."""
    return clearance(world, pose.x, pose.y) <= body_radius


# -- world files -----------------------------------------------------------

def world_to_dict(world: WorldSpec, start: Optional[Pose] = None) -> dict:
    d = {
        "bounds": list(world.bounds),
        "static_obstacles": [[list(p) for p in poly] for poly in world.static_obstacles],
        "mobile_obstacles": [
            {"vertices": [list(p) for p in m.vertices],
             "waypoints": [list(p) for p in m.waypoints],
             "speed": m.speed, "loop": m.loop}
            for m in world.mobile_obstacles
        ],
    }
    if start is not None:
        d["start"] = [start.x, start.y, start.heading]
    return d


def world_from_dict(d: dict) -> Tuple[WorldSpec, Optional[Pose]]:
    try:
        world = WorldSpec(
            bounds=tuple(float(v) for v in d["bounds"]),
            static_obstacles=tuple(_as_polygon(p) for p in d.get("static_obstacles", [])),
            mobile_obstacles=tuple(
                MobileObstacle(
                    vertices=_as_polygon(m["vertices"]),
                    waypoints=tuple((float(x), float(y)) for x, y in m["waypoints"]),
                    speed=float(m["speed"]),
                    loop=bool(m.get("loop", True)),
                )
                for m in d.get("mobile_obstacles", [])
            ),
        )
    except (KeyError, TypeError) as exc:
        raise WorldError(f"malformed world description: {exc}") from exc
    start = Pose(*d["start"]) if "start" in d else None
    return world, start


def load_world(path) -> Tuple[WorldSpec, Optional[Pose]]:
    return world_from_dict(json.loads(Path(path).read_text()))


def save_world(path, world: WorldSpec, start: Optional[Pose] = None) -> None:
    Path(path).write_text(json.dumps(world_to_dict(world, start), indent=2) + "\n")


def move_with_contact(world: WorldSpec, pose: Pose, command: Command, robot: RobotSpec,
                      dt: float, iterations: int = 24) -> Tuple[Pose, bool]:
    """Step kinematics, halting the robot at first contact instead of penetrating.

    Returns the new pose and whether the robot is in contact afterwards.
    """
    target = step_kinematics(pose, command, robot, dt)
    r = robot.body_radius
    if not collides(world, target, r):
        return target, False
    if command in (Command.LEFT, Command.RIGHT, Command.STOP) or collides(world, pose, r):
        # Rotation never changes the occupied disc; an overlapped robot stays put.
        return target if command is not Command.STOP else pose, True
    lo, hi = 0.0, 1.0
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        probe = Pose(pose.x + mid * (target.x - pose.x), pose.y + mid * (target.y - pose.y), pose.heading)
        if collides(world, probe, r):
            hi = mid
        else:
            lo = mid
    return Pose(pose.x + lo * (target.x - pose.x), pose.y + lo * (target.y - pose.y), pose.heading), True
