"""Labeled scan datasets: CSV persistence, teacher-driven collection,
oscillation detection/relabeling and stratified splitting."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .reflex import Thresholds, arduino_decide
from .sensors import NoiseSpec, sense
from .serial_link import decode_scan, encode_scan
from .types import N_COMMANDS, Command, ScanVector
from .world import Pose, RobotSpec, WorldSpec, advance_obstacles, collides, move_with_contact

CSV_HEADER = "Front,Back,Left,Right,Command"
DEFAULT_TICK = 0.05


class LabeledSample(NamedTuple):
    scan: ScanVector
    label: Command


@dataclass(frozen=True)
class Dataset:
    samples: Tuple[LabeledSample, ...] = ()

    @classmethod
    def from_arrays(cls, X, y) -> "Dataset":
        return cls(tuple(LabeledSample(ScanVector(*map(float, row)), Command(int(c))) for row, c in zip(X, y)))

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __getitem__(self, i):
        return self.samples[i]

    def __add__(self, other: "Dataset") -> "Dataset":
        return Dataset(self.samples + other.samples)

    @property
    def X(self) -> np.ndarray:
        return np.array([s.scan for s in self.samples], dtype=np.float64).reshape(-1, 4)

    @property
    def y(self) -> np.ndarray:
        return np.array([int(s.label) for s in self.samples], dtype=np.int64)

    def labels(self) -> List[Command]:
        return [s.label for s in self.samples]


class Episode(NamedTuple):
    start_index: int
    end_index: int


class ParseError(ValueError):
    def __init__(self, kind: str, line_no: Optional[int] = None, detail: str = ""):
        where = f" at line {line_no}" if line_no is not None else ""
        super().__init__(f"{kind} error{where}: {detail}")
        self.kind = kind
        self.line_no = line_no


class CollectError(RuntimeError):
    def __init__(self, message: str, partial: Dataset, tick: int):
        super().__init__(message)
        self.partial = partial
        self.tick = tick


class SplitError(ValueError):
    pass


# -- CSV ---------------------------------------------------------------------

def emit_csv(ds: Dataset) -> bytes:
    lines = [CSV_HEADER]
    for scan, label in ds:
        lines.append(f"{scan.front:.2f},{scan.back:.2f},{scan.left:.2f},{scan.right:.2f},{label.label}")
    return ("\n".join(lines) + "\n").encode("ascii")


def parse_csv(data: bytes) -> Dataset:
    text = data.decode("ascii", errors="replace") if isinstance(data, (bytes, bytearray)) else data
    lines = text.splitlines()
    if not lines or lines[0].strip() != CSV_HEADER:
        raise ParseError("header", 1, f"expected {CSV_HEADER!r}")
    samples = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.strip().split(",")
        if len(parts) != 5:
            raise ParseError("row", line_no, f"expected 5 fields, got {len(parts)}")
        try:
            values = [float(p) for p in parts[:4]]
            label = Command.from_label(parts[4].strip())
        except ValueError as exc:
            raise ParseError("row", line_no, str(exc)) from None
        scan = ScanVector(*values)
        if not scan.in_envelope():
            raise ParseError("row", line_no, f"reading outside sensor envelope: {scan}")
        samples.append(LabeledSample(scan, label))
    return Dataset(tuple(samples))


def read_csv(path) -> Dataset:
    with open(path, "rb") as fh:
        return parse_csv(fh.read())


def write_csv(path, ds: Dataset) -> None:
    with open(path, "wb") as fh:
        fh.write(emit_csv(ds))


# -- collection --------------------------------------------------------------

def collect(world: WorldSpec, robot: RobotSpec, th: Thresholds, steps: int, seed: int,
            start: Pose, noise_sigma: float = 0.5, dt: float = DEFAULT_TICK) -> Dataset:
    """Drive the on-board policy for ``steps`` ticks and log (scan, command) pairs.

    Scans are stored as the planner host would receive them, i.e. after the
    two-decimal serial round trip.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    noise = NoiseSpec(noise_sigma, seed)
    pose = start
    samples = []
    for tick in range(steps):
        w = advance_obstacles(world, tick * dt)
        scan = decode_scan(encode_scan(sense(w, pose, robot, noise, tick)))
        cmd = arduino_decide(scan, th)
        samples.append(LabeledSample(scan, cmd))
        pose, contact = move_with_contact(advance_obstacles(world, (tick + 1) * dt), pose, cmd, robot, dt)
        if contact or collides(advance_obstacles(world, (tick + 1) * dt), pose, robot.body_radius):
            raise CollectError(f"teacher run collided at tick {tick}", Dataset(tuple(samples)), tick)
    return Dataset(tuple(samples))


# -- oscillation repair ------------------------------------------------------

def detect_oscillation(labels: Sequence[Command], window: int = 8, min_alternations: int = 3) -> List[Episode]:
    """Maximal left/right-only runs with enough switches inside some window."""
    if window < 2:
        raise ValueError("window must be >= 2")
    episodes = []
    n = len(labels)
    i = 0
    while i < n:
        if labels[i] not in (Command.LEFT, Command.RIGHT):
            i += 1
            continue
        j = i
        while j + 1 < n and labels[j + 1] in (Command.LEFT, Command.RIGHT):
            j += 1
        switches = [int(labels[k] != labels[k + 1]) for k in range(i, j)]
        span = window - 1
        best = max((sum(switches[s:s + span]) for s in range(max(1, len(switches) - span + 1))), default=0)
        if best >= min_alternations:
            episodes.append(Episode(i, j))
        i = j + 1
    return episodes


def relabel(ds: Dataset, episodes: Iterable[Episode]) -> Dataset:
    """Commit each oscillation episode to its first turn."""
    samples = list(ds.samples)
    for ep in episodes:
        first = samples[ep.start_index].label
        for k in range(ep.start_index, ep.end_index + 1):
            samples[k] = LabeledSample(samples[k].scan, first)
    return Dataset(tuple(samples))


def repair(ds: Dataset, window: int = 8, min_alternations: int = 3) -> Tuple[Dataset, int]:
    """Detect and relabel in one pass; returns the new dataset and the changed-label count."""
    fixed = relabel(ds, detect_oscillation(ds.labels(), window, min_alternations))
    changed = sum(a.label != b.label for a, b in zip(ds, fixed))
    return fixed, changed


# -- splitting ---------------------------------------------------------------

def split(ds: Dataset, train_fraction: float = 0.75, seed: int = 42) -> Tuple[Dataset, Dataset]:
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    y = ds.y
    counts = np.bincount(y, minlength=N_COMMANDS)
    present = [c for c in range(N_COMMANDS) if counts[c]]
    if any(counts[c] < 2 for c in present):
        raise SplitError("stratified split needs >= 2 samples of every present class")

    # largest-remainder apportionment keeps the total at round(f * n)
    target = int(round(train_fraction * len(ds)))
    quota = {c: train_fraction * counts[c] for c in present}
    n_train = {c: min(max(int(np.floor(quota[c])), 1), counts[c] - 1) for c in present}
    order = sorted(present, key=lambda c: (-(quota[c] - np.floor(quota[c])), c))
    k = 0
    while sum(n_train.values()) < target and k < 2 * len(order):
        c = order[k % len(order)]
        if n_train[c] < counts[c] - 1:
            n_train[c] += 1
        k += 1

    rng = np.random.default_rng(seed)
    train_idx = []
    for c in present:
        idx = np.flatnonzero(y == c)
        train_idx.extend(rng.permutation(idx)[: n_train[c]].tolist())
    mask = np.zeros(len(ds), dtype=bool)
    mask[train_idx] = True
    train = Dataset(tuple(s for s, m in zip(ds, mask) if m))
    test = Dataset(tuple(s for s, m in zip(ds, mask) if not m))
    return train, test
