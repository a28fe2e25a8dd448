import pytest
from hypothesis import given, settings, strategies as st

from navbot.navigator import (HOLD, PLANNER, REFLEX, NavConfig, Navigator, TrajectoryRecord, compute_metrics,
                              decide, emit_trajectory, parse_trajectory, run_episode)
from navbot.reflex import Thresholds, is_critical, teacher_decide
from navbot.scenarios import build_scenario
from navbot.types import Command, ScanVector
from navbot.world import Pose, RobotSpec, WorldSpec

ROBOT = RobotSpec()
OPEN = ScanVector(100.0, 100.0, 100.0, 100.0)
L, R, F = Command.LEFT, Command.RIGHT, Command.FRONT


class Fixed:
    def __init__(self, cmd):
        self.cmd = cmd

    def predict(self, scan):
        return self.cmd


def test_critical_front_answered_same_tick():
    nav = Navigator(Fixed(F))
    assert nav.decide(ScanVector(4.0, 100, 100, 100), 0) == (Command.BACK, REFLEX)


def test_planner_reply_lands_after_delay():
    nav = Navigator(Fixed(Command.LEFT))
    out = [nav.decide(OPEN, t) for t in range(5)]
    assert out[0] == (Command.STOP, HOLD)
    assert out[1] == (Command.STOP, HOLD)
    assert out[2] == (Command.LEFT, PLANNER)
    assert nav.pending <= 1


def test_zero_delay_answers_immediately():
    nav = Navigator(Fixed(Command.RIGHT), NavConfig(planner_delay_ticks=0))
    assert nav.decide(OPEN, 0) == (Command.RIGHT, PLANNER)


def test_teacher_stands_in_without_model():
    cfg = NavConfig(planner_delay_ticks=0)
    scan = ScanVector(10, 100, 50, 30)
    assert decide(scan, None, cfg, Navigator(None, cfg), 0) == (teacher_decide(scan, Thresholds()), PLANNER)


def test_stale_reply_never_actuates_after_reflex():
    nav = Navigator(Fixed(Command.LEFT))
    nav.decide(OPEN, 0)                     # request in flight, due at tick 2
    assert nav.decide(ScanVector(100, 3, 100, 100), 1) == (Command.FRONT, REFLEX)
    assert nav.pending == 0
    assert nav.decide(OPEN, 2) == (Command.FRONT, HOLD)   # old reply was dropped
    assert nav.decide(OPEN, 3) == (Command.FRONT, HOLD)
    assert nav.decide(OPEN, 4) == (Command.LEFT, PLANNER)


def test_open_arena_drives_straight():
    world = WorldSpec((0, 0, 3000, 3000))
    start = Pose(1500, 1500, 0.0)
    cfg = NavConfig(max_ticks=200)
    traj, m = run_episode(world, ROBOT, "reflex_only", cfg=cfg, start=start)
    assert all(r.command is F for r in traj)
    assert m.collisions == 0
    traj, m = run_episode(world, ROBOT, "two_tier", cfg=cfg, start=start)
    assert all(r.command is F for r in traj[2:])
    assert m.collisions == 0 and m.lr_alternations == 0


def test_episode_is_deterministic(trained_tree):
    sc = build_scenario("course", 2)
    cfg = NavConfig(max_ticks=300)
    a = run_episode(sc.world, ROBOT, "two_tier", trained_tree, cfg, 7, sc.start)
    b = run_episode(sc.world, ROBOT, "two_tier", trained_tree, cfg, 7, sc.start)
    assert emit_trajectory(a[0]) == emit_trajectory(b[0]) and a[1] == b[1]
    assert [r.tick for r in a[0]] == list(range(len(a[0])))


def test_bad_policy_rejected():
    with pytest.raises(ValueError):
        run_episode(WorldSpec((0, 0, 100, 100)), ROBOT, "autopilot")


@settings(max_examples=12)
@given(st.sampled_from(["course", "enclosure", "corner", "mobile"]), st.integers(0, 50), st.integers(0, 5),
       st.floats(0.0, 3.0))
def test_arbitration_is_sound(trained_tree, name, scenario_seed, noise_seed, sigma):
    sc = build_scenario(name, scenario_seed)
    cfg = NavConfig(max_ticks=250, noise_sigma=sigma)
    traj, m = run_episode(sc.world, ROBOT, "two_tier", trained_tree, cfg, noise_seed, sc.start, sc.exit_region)
    for rec in traj:
        assert (rec.source == REFLEX) == is_critical(rec.scan, cfg.thresholds)
    if any(is_critical(r.scan, cfg.thresholds) for r in traj):
        assert m.min_reaction_ticks == 0


def test_metrics_examples():
    traj = [TrajectoryRecord(t, Pose(10 + t, 50, 0), OPEN, c, PLANNER) for t, c in enumerate([L, R, L, R, L])]
    assert compute_metrics(traj).lr_alternations == 4
    straight = [TrajectoryRecord(t, Pose(100 + t, 100, 0), OPEN, F, PLANNER) for t in range(50)]
    m = compute_metrics(straight, WorldSpec((0, 0, 1000, 1000)))
    assert (m.lr_alternations, m.collisions, m.escaped, m.ticks_to_exit) == (0, 0, False, None)
    crit = ScanVector(3, 100, 100, 100)
    injected = straight[:10] + [TrajectoryRecord(10, Pose(110, 100, 0), crit, Command.BACK, REFLEX)]
    assert compute_metrics(injected).min_reaction_ticks == 0


def test_collision_count_is_per_contact_episode():
    w = WorldSpec((0, 0, 1000, 1000))
    xs = [500, 12, 12, 500, 12]
    traj = [TrajectoryRecord(t, Pose(x, 500, 0), OPEN, F, PLANNER) for t, x in enumerate(xs)]
    assert compute_metrics(traj, w).collisions == 2


def test_trajectory_log_round_trip(trained_tree):
    sc = build_scenario("corner", 0)
    traj, m = run_episode(sc.world, ROBOT, "reflex_only", cfg=NavConfig(max_ticks=120, noise_sigma=0.0),
                          start=sc.start)
    back = parse_trajectory(emit_trajectory(traj))
    assert [r.command for r in back] == [r.command for r in traj]
    assert compute_metrics(back).lr_alternations == m.lr_alternations
