"""Two-tier runtime: zero-latency critical reflex on the microcontroller side,
learned planner behind a delayed serial link, closed-loop episodes and metrics."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from .reflex import Thresholds, critical_reflex, is_critical, teacher_decide
from .sensors import NoiseSpec, sense
from .serial_link import DelayChannel, FrameError, decode_command, decode_scan, encode_command, encode_scan
from .types import TURNS, Command, ScanVector
from .world import Pose, RobotSpec, WorldSpec, advance_obstacles, clearance, move_with_contact

REFLEX = "reflex"
PLANNER = "planner"
HOLD = "hold"
POLICIES = ("reflex_only", "two_tier")
STUCK_WINDOW = 400
# poses logged at contact sit within the contact bisection tolerance of the obstacle
CONTACT_TOLERANCE = 1e-3

Region = Tuple[float, float, float, float]


@dataclass(frozen=True)
class NavConfig:
    thresholds: Thresholds = field(default_factory=Thresholds)
    planner_delay_ticks: int = 2
    tick_seconds: float = 0.05
    max_ticks: int = 2000
    noise_sigma: float = 0.5

    def __post_init__(self):
        if self.planner_delay_ticks < 0 or self.tick_seconds <= 0 or self.max_ticks < 1:
            raise ValueError("invalid navigator configuration")


class TrajectoryRecord(NamedTuple):
    tick: int
    pose: Pose
    scan: ScanVector
    command: Command
    source: str


class Navigator:
    """Per-tick arbitration between the reflex and the remote planner.

    The planner host is emulated in-process: scan frames travel up a
    :class:`DelayChannel`, are decoded and classified, and the reply byte is
    returned on a zero-delay downlink. Only one request is ever in flight.
    """

    def __init__(self, model=None, cfg: NavConfig = NavConfig()):
        self.model = model
        self.cfg = cfg
        self.uplink = DelayChannel(cfg.planner_delay_ticks)
        self.downlink = DelayChannel(0)
        self.in_flight = False
        self.last = Command.STOP

    def _plan(self, frame: bytes) -> bytes:
        scan = decode_scan(frame)
        if self.model is None:
            cmd = teacher_decide(scan, self.cfg.thresholds)
        else:
            cmd = self.model.predict(scan)
        return encode_command(cmd)

    def _service(self, tick: int) -> Optional[Command]:
        frame = self.uplink.poll(tick)
        if frame is not None:
            try:
                self.downlink.send(tick, self._plan(frame))
            except FrameError:
                self.in_flight = False
                return None
        reply = self.downlink.poll(tick)
        if reply is None:
            return None
        self.in_flight = False
        try:
            return decode_command(reply)
        except FrameError:
            return None

    def decide(self, scan: ScanVector, tick: int) -> Tuple[Command, str]:
        th = self.cfg.thresholds
        if is_critical(scan, th):
            # stale planner replies must never actuate after a reflex event
            self.uplink.clear()
            self.downlink.clear()
            self.in_flight = False
            self.last = critical_reflex(scan, th)
            return self.last, REFLEX
        cmd = self._service(tick)
        if not self.in_flight:
            self.uplink.send(tick, encode_scan(scan))
            self.in_flight = True
            if cmd is None:
                cmd = self._service(tick)
        if cmd is None:
            return self.last, HOLD
        self.last = cmd
        return cmd, PLANNER

    @property
    def pending(self) -> int:
        return len(self.uplink) + len(self.downlink)


class ReflexOnly:
    """Microcontroller alone: reflex when critical, threshold teacher otherwise."""

    def __init__(self, cfg: NavConfig = NavConfig()):
        self.cfg = cfg
        self.pending = 0

    def decide(self, scan: ScanVector, tick: int) -> Tuple[Command, str]:
        if is_critical(scan, self.cfg.thresholds):
            return critical_reflex(scan, self.cfg.thresholds), REFLEX
        return teacher_decide(scan, self.cfg.thresholds), PLANNER


def decide(scan: ScanVector, model, cfg: NavConfig, link: Navigator, tick: int) -> Tuple[Command, str]:
    """Functional entry point; ``link`` carries the serial state between ticks."""
    link.model = model
    link.cfg = cfg
    return link.decide(scan, tick)


@dataclass(frozen=True)
class EpisodeMetrics:
    collisions: int
    escaped: bool
    ticks_to_exit: Optional[int]
    lr_alternations: int
    min_reaction_ticks: Optional[int]
    displacement_per_window: float


def in_region(region: Optional[Region], pose: Pose) -> bool:
    if region is None:
        return False
    xmin, ymin, xmax, ymax = region
    return xmin <= pose.x <= xmax and ymin <= pose.y <= ymax


def run_episode(world: WorldSpec, robot: RobotSpec, policy: str, model=None, cfg: NavConfig = NavConfig(),
                seed: int = 0, start: Optional[Pose] = None, exit_region: Optional[Region] = None,
                teacher_fallback: bool = True) -> Tuple[List[TrajectoryRecord], EpisodeMetrics]:
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}; expected one of {POLICIES}")
    if policy == "two_tier" and model is None and not teacher_fallback:
        raise ValueError("two_tier needs a model or the teacher fallback")
    if start is None:
        xmin, ymin, xmax, ymax = world.bounds
        start = Pose((xmin + xmax) / 2, (ymin + ymax) / 2, 0.0)
    nav = ReflexOnly(cfg) if policy == "reflex_only" else Navigator(model, cfg)
    noise = NoiseSpec(cfg.noise_sigma, seed)
    dt = cfg.tick_seconds
    pose = start
    traj: List[TrajectoryRecord] = []
    for tick in range(cfg.max_ticks):
        w = advance_obstacles(world, tick * dt)
        scan = sense(w, pose, robot, noise, tick)
        cmd, source = nav.decide(scan, tick)
        traj.append(TrajectoryRecord(tick, pose, scan, cmd, source))
        assert nav.pending <= 1
        if in_region(exit_region, pose):
            break
        pose, _ = move_with_contact(advance_obstacles(world, (tick + 1) * dt), pose, cmd, robot, dt)
    return traj, compute_metrics(traj, world, exit_region, robot.body_radius, cfg)


def compute_metrics(traj: List[TrajectoryRecord], world: Optional[WorldSpec] = None,
                    exit_region: Optional[Region] = None, body_radius: float = 12.0,
                    cfg: NavConfig = NavConfig()) -> EpisodeMetrics:
    if not traj:
        raise ValueError("empty trajectory")
    dt = cfg.tick_seconds

    collisions = 0
    if world is not None:
        touching = False
        for rec in traj:
            w = advance_obstacles(world, rec.tick * dt)
            now = clearance(w, rec.pose.x, rec.pose.y) <= body_radius + CONTACT_TOLERANCE
            if now and not touching:
                collisions += 1
            touching = now

    ticks_to_exit = next((r.tick for r in traj if in_region(exit_region, r.pose)), None)

    cmds = [r.command for r in traj]
    lr = sum(1 for a, b in zip(cmds, cmds[1:]) if a in TURNS and b in TURNS and a != b)

    reactions = []
    was_critical = False
    for i, rec in enumerate(traj):
        crit = is_critical(rec.scan, cfg.thresholds)
        if crit and not was_critical:
            answer = next((r.tick for r in traj[i:] if r.source == REFLEX), None)
            if answer is not None:
                reactions.append(answer - rec.tick)
        was_critical = crit

    xy = np.array([(r.pose.x, r.pose.y) for r in traj])
    if len(xy) > STUCK_WINDOW:
        disp = np.hypot(*(xy[STUCK_WINDOW:] - xy[:-STUCK_WINDOW]).T)
        displacement = float(disp.min())
    else:
        displacement = float(math.hypot(*(xy[-1] - xy[0])))

    return EpisodeMetrics(
        collisions=collisions,
        escaped=ticks_to_exit is not None,
        ticks_to_exit=ticks_to_exit,
        lr_alternations=lr,
        min_reaction_ticks=min(reactions) if reactions else None,
        displacement_per_window=displacement,
    )


# -- trajectory log ------------------------------------------------------------

TRAJECTORY_HEADER = "tick,x,y,heading,front,back,left,right,command,source"


def emit_trajectory(traj: List[TrajectoryRecord]) -> bytes:
    out = io.StringIO()
    out.write(TRAJECTORY_HEADER + "\n")
    for r in traj:
        s = r.scan
        out.write(f"{r.tick},{r.pose.x:.2f},{r.pose.y:.2f},{r.pose.heading:.2f},"
                  f"{s.front:.2f},{s.back:.2f},{s.left:.2f},{s.right:.2f},{r.command.label},{r.source}\n")
    return out.getvalue().encode("ascii")


def parse_trajectory(data: bytes) -> List[TrajectoryRecord]:
    lines = data.decode("ascii").splitlines()
    if not lines or lines[0].strip() != TRAJECTORY_HEADER:
        raise ValueError(f"trajectory log must start with {TRAJECTORY_HEADER!r}")
    traj = []
    for line in lines[1:]:
        if not line.strip():
            continue
        f = line.split(",")
        traj.append(TrajectoryRecord(int(f[0]), Pose(float(f[1]), float(f[2]), float(f[3])),
                                     ScanVector(*map(float, f[4:8])), Command.from_label(f[8]), f[9]))
    return traj
