"""navbot command line: collect -> relabel -> train -> bench -> simulate -> report.

Exit codes: 0 success, 1 operational error, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Optional, Sequence

from .corpus import build_corpus
from .dataset import CollectError, ParseError, SplitError, collect, read_csv, repair, split, write_csv
from .learners import ALGORITHMS, FitError, accuracy, benchmark_fit, fit, load_model, save_model
from .navigator import POLICIES, NavConfig, compute_metrics, emit_trajectory, parse_trajectory, run_episode
from .reflex import Thresholds
from .scenarios import SCENARIOS, UnknownScenario, build_scenario
from .serial_link import FrameError
from .world import Pose, RobotSpec, WorldError, load_world, world_from_dict, world_to_dict

log = logging.getLogger("navbot")

OUT_DIRS = ("data", "models", "logs", "reports")
# logged poses carry two decimals, so clearance read back from a log is off by < 0.008 cm
LOG_POSE_SLACK = 0.008


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Everything a run depends on; loadable from a JSON file with the same keys."""

    world: Optional[str] = None
    threshold: float = 20.0
    critical: float = 5.0
    body_radius: float = 12.0
    speed: float = 20.0
    noise_sigma: float = 0.5
    planner_delay_ticks: int = 2
    n_trees: int = 100
    features_per_split: int = 2
    max_depth: int = 16
    k: int = 5
    train_fraction: float = 0.75
    split_seed: int = 42
    seed: int = 0
    out_dir: str = "out"

    @classmethod
    def from_json(cls, path) -> "RunConfig":
        raw = json.loads(Path(path).read_text())
        known = {f for f in cls.__dataclass_fields__}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        cfg = cls(**raw)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.world is not None and not Path(self.world).exists():
            raise UsageError(f"world file not found: {self.world}")
        if not 0 <= self.noise_sigma < 50:
            raise UsageError("noise_sigma must be in [0, 50)")
        if not 0 < self.train_fraction < 1:
            raise UsageError("train_fraction must be in (0, 1)")
        if min(self.n_trees, self.k, self.max_depth, self.features_per_split) < 1:
            raise UsageError("learner parameters must be >= 1")
        if self.planner_delay_ticks < 0:
            raise UsageError("planner_delay_ticks must be >= 0")
        self.thresholds()
        self.robot()

    def thresholds(self) -> Thresholds:
        try:
            return Thresholds(self.threshold, self.critical)
        except ValueError as err:
            raise UsageError(str(err)) from None

    def robot(self) -> RobotSpec:
        try:
            return RobotSpec(body_radius=self.body_radius, linear_speed=self.speed)
        except WorldError as err:
            raise UsageError(str(err)) from None

    def learner_params(self, algo: str) -> dict:
        if algo == "tree":
            return {"max_depth": self.max_depth}
        if algo == "forest":
            return {"n_trees": self.n_trees, "features_per_split": self.features_per_split}
        return {"k": self.k}


def out_path(cfg: RunConfig, kind: str, name: str) -> Path:
    p = Path(cfg.out_dir) / kind / name
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _resolve(path: Optional[str], cfg: RunConfig, kind: str, default: str) -> Path:
    if path:
        p = Path(path)
        if p.parent != Path("."):
            p.parent.mkdir(parents=True, exist_ok=True)
        return p
    return out_path(cfg, kind, default)


# -- subcommands -----------------------------------------------------------------

def cmd_collect(args, cfg: RunConfig) -> int:
    out = _resolve(args.out, cfg, "data", "data.csv")
    world_file = args.world or cfg.world
    if world_file is None and args.scenario is None:
        ds = build_corpus(seed=args.seed, robot=cfg.robot(), th=cfg.thresholds(), noise_sigma=cfg.noise_sigma,
                          fix_oscillation=False)
    else:
        if world_file is not None:
            world, start = load_world(world_file)
            if start is None:
                xmin, ymin, xmax, ymax = world.bounds
                start = Pose((xmin + xmax) / 2, (ymin + ymax) / 2, 0.0)
        else:
            sc = build_scenario(args.scenario, args.scenario_seed)
            world, start = sc.world, sc.start
        try:
            ds = collect(world, cfg.robot(), cfg.thresholds(), args.steps, args.seed, start, cfg.noise_sigma)
        except CollectError as err:
            write_csv(out, err.partial)
            print(f"error: {err}; partial data ({len(err.partial)} rows) in {out}", file=sys.stderr)
            return 1
    write_csv(out, ds)
    print(f"{len(ds)} samples -> {out}")
    return 0


def cmd_relabel(args, cfg: RunConfig) -> int:
    ds = read_csv(args.input)
    fixed, changed = repair(ds, args.window, args.min_alternations)
    out = _resolve(args.out, cfg, "data", "fixed.csv")
    write_csv(out, fixed)
    print(f"{changed} of {len(ds)} labels changed -> {out}")
    return 0


def cmd_train(args, cfg: RunConfig) -> int:
    ds = read_csv(args.data)
    model = fit(args.algo, ds, args.seed, **cfg.learner_params(args.algo))
    out = _resolve(args.model, cfg, "models", f"{args.algo}.json")
    save_model(out, model)
    print(f"{args.algo} trained on {len(ds)} samples, train accuracy {accuracy(model, ds):.4f} -> {out}")
    return 0


def bench_rows(ds, cfg: RunConfig, seed: int, repetitions: int) -> List[dict]:
    train, test = split(ds, cfg.train_fraction, cfg.split_seed)
    rows = []
    for algo in ALGORITHMS:
        params = cfg.learner_params(algo)
        model = fit(algo, train, seed, **params)
        rows.append({
            "algorithm": algo,
            "train_acc": accuracy(model, train),
            "test_acc": accuracy(model, test),
            "fit_seconds": benchmark_fit(algo, train, repetitions, seed, **params),
        })
    return rows


def report_tables(rows: Sequence[dict]) -> tuple:
    """Fixed-width text and CSV renderings of the same numbers."""
    cells = [(r["algorithm"], f"{r['train_acc']:.2f}", f"{r['test_acc']:.2f}", f"{r['fit_seconds']:.4f}")
             for r in rows]
    head = ("algorithm", "train_acc", "test_acc", "fit_seconds")
    widths = [max(len(c[i]) for c in [head, *cells]) for i in range(4)]
    lines = ["  ".join(c[i].ljust(widths[i]) if i == 0 else c[i].rjust(widths[i]) for i in range(4))
             for c in [head, *cells]]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(head)
    w.writerows(cells)
    return "\n".join(lines) + "\n", buf.getvalue()


def cmd_bench(args, cfg: RunConfig) -> int:
    ds = read_csv(args.data)
    rows = bench_rows(ds, cfg, args.seed, args.repetitions)
    text, table = report_tables(rows)
    print(text, end="")
    out_path(cfg, "reports", "bench.txt").write_text(text)
    out_path(cfg, "reports", "bench.csv").write_text(table)
    return 0


def cmd_simulate(args, cfg: RunConfig) -> int:
    sc = build_scenario(args.scenario, args.scenario_seed)
    model = load_model(args.model) if args.model else None
    if args.policy == "two_tier" and model is None:
        log.warning("no --model given; two_tier falls back to the threshold teacher as planner")
    sigma = cfg.noise_sigma if args.sigma is None else args.sigma
    nav = NavConfig(cfg.thresholds(), cfg.planner_delay_ticks, max_ticks=args.max_ticks or sc.max_ticks,
                    noise_sigma=sigma)
    traj, metrics = run_episode(sc.world, cfg.robot(), args.policy, model, nav, args.seed, sc.start,
                                sc.exit_region)
    out = _resolve(args.log, cfg, "logs", f"{args.scenario}_{args.policy}.csv")
    out.write_bytes(emit_trajectory(traj))
    meta = {
        "scenario": args.scenario, "scenario_seed": args.scenario_seed, "policy": args.policy,
        "seed": args.seed, "noise_sigma": sigma, "model": args.model,
        "exit_region": list(sc.exit_region) if sc.exit_region else None,
        "config": asdict(cfg),
        "world": world_to_dict(sc.world, sc.start),
    }
    Path(str(out) + ".meta.json").write_text(json.dumps(meta, indent=1, sort_keys=True) + "\n")
    print(f"{len(traj)} ticks -> {out}")
    print(format_metrics(metrics))
    return 0


def format_metrics(m) -> str:
    return "\n".join(f"{k}: {v}" for k, v in asdict(m).items())


def cmd_report(args, cfg: RunConfig) -> int:
    traj = parse_trajectory(Path(args.log).read_bytes())
    if not traj:
        raise ValueError("trajectory log has no rows")
    meta_file = Path(args.log + ".meta.json")
    world = region = None
    robot = cfg.robot()
    nav = NavConfig(cfg.thresholds(), cfg.planner_delay_ticks)
    if meta_file.exists():
        meta = json.loads(meta_file.read_text())
        world, _ = world_from_dict(meta["world"])
        region = tuple(meta["exit_region"]) if meta.get("exit_region") else None
        c = meta.get("config", {})
        robot = RobotSpec(body_radius=c.get("body_radius", robot.body_radius),
                          linear_speed=c.get("speed", robot.linear_speed))
        nav = NavConfig(Thresholds(c.get("threshold", 20.0), c.get("critical", 5.0)),
                        c.get("planner_delay_ticks", 2))
    else:
        log.warning("no %s; collisions and exit are not scored", meta_file.name)
    metrics = compute_metrics(traj, world, region, robot.body_radius + LOG_POSE_SLACK, nav)
    text = format_metrics(metrics)
    print(text)
    out_path(cfg, "reports", Path(args.log).stem + ".metrics.txt").write_text(text + "\n")
    return 0


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="navbot", description="Two-tier reactive navigation toolkit")
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--out-dir", help="output root (default: out)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", metavar="command")

    c = sub.add_parser("collect", help="run the threshold teacher and log labeled scans")
    c.add_argument("--world", help="world JSON file (default: the built-in training corpus)")
    c.add_argument("--scenario", choices=SCENARIOS, help="collect in a built-in scenario instead")
    c.add_argument("--scenario-seed", type=int, default=0)
    c.add_argument("--steps", type=int, default=1000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out")

    r = sub.add_parser("relabel", help="commit left/right oscillation episodes to their first turn")
    r.add_argument("--in", dest="input", required=True)
    r.add_argument("--out")
    r.add_argument("--window", type=int, default=8)
    r.add_argument("--min-alternations", type=int, default=3)

    t = sub.add_parser("train", help="fit a classifier and save it as JSON")
    t.add_argument("--algo", choices=ALGORITHMS, default="tree")
    t.add_argument("--data", required=True)
    t.add_argument("--model")
    t.add_argument("--seed", type=int, default=0)

    b = sub.add_parser("bench", help="accuracy and fit-time table for all three learners")
    b.add_argument("--data", required=True)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--repetitions", type=int, default=5)

    s = sub.add_parser("simulate", help="run one closed-loop episode and write its trajectory log")
    s.add_argument("--scenario", choices=SCENARIOS, required=True)
    s.add_argument("--scenario-seed", type=int, default=0)
    s.add_argument("--policy", choices=POLICIES, default="two_tier")
    s.add_argument("--model")
    s.add_argument("--log")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--sigma", type=float, help="sensor noise override")
    s.add_argument("--max-ticks", type=int)

    rep = sub.add_parser("report", help="score a trajectory log")
    rep.add_argument("--log", required=True)
    return p


HANDLERS = {"collect": cmd_collect, "relabel": cmd_relabel, "train": cmd_train, "bench": cmd_bench,
            "simulate": cmd_simulate, "report": cmd_report}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return 0 if exit_.code == 0 else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        cfg = RunConfig.from_json(args.config) if args.config else RunConfig()
        if args.out_dir:
            cfg.out_dir = args.out_dir
        return HANDLERS[args.command](args, cfg)
    except UsageError as err:
        parser.print_usage(sys.stderr)
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError, ParseError, SplitError, FitError, FrameError, WorldError,
            UnknownScenario, CollectError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
