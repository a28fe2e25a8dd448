"""Training corpus: teacher runs across the scenario family, repaired and merged.

Scenario seeds used here (100+) are disjoint from the evaluation seeds.
"""
from __future__ import annotations

import logging
from typing import List, Tuple

import numpy as np

from .dataset import CollectError, Dataset, collect, repair
from .reflex import Thresholds
from .scenarios import build_scenario
from .types import SENSOR_MAX_RANGE, SENSOR_MIN_RANGE
from .world import RobotSpec

log = logging.getLogger(__name__)

# (scenario, scenario seed, ticks)
DEFAULT_RUNS: Tuple[Tuple[str, int, int], ...] = (
    *(("course", s, 1500) for s in range(100, 108)),
    *(("enclosure", s, 1500) for s in range(100, 104)),
    ("corner", 100, 600),
    ("corner", 101, 600),
)


def build_corpus(runs=DEFAULT_RUNS, seed: int = 0, robot: RobotSpec = RobotSpec(),
                 th: Thresholds = Thresholds(), noise_sigma: float = 0.5,
                 fix_oscillation: bool = True) -> Dataset:
    parts: List[Dataset] = []
    for name, scenario_seed, ticks in runs:
        sc = build_scenario(name, scenario_seed)
        try:
            ds = collect(sc.world, robot, th, ticks, seed + scenario_seed, sc.start, noise_sigma)
        except CollectError as err:
            # keep the clean prefix; the tick that touched is dropped
            log.warning("%s/%d collided at tick %d; keeping %d samples", name, scenario_seed,
                        err.tick, err.tick)
            ds = Dataset(err.partial.samples[:err.tick])
        if fix_oscillation:
            ds, changed = repair(ds)
            log.info("%s/%d: %d samples, %d relabeled", name, scenario_seed, len(ds), changed)
        parts.append(ds)
    out = Dataset()
    for p in parts:
        out = out + p
    return out


def logging_jitter(ds: Dataset, sigma: float = 0.5, seed: int = 0) -> Dataset:
    """Re-measure every logged distance with an independent ping.

    On the hardware the row written to the CSV and the reading the firmware
    acted on are separate pings, so labels are not an exact function of the
    logged values.
    """
    if sigma <= 0 or len(ds) == 0:
        return ds
    rng = np.random.default_rng(seed)
    X = ds.X + rng.normal(0.0, sigma, size=(len(ds), 4))
    X = np.round(np.clip(X, SENSOR_MIN_RANGE, SENSOR_MAX_RANGE), 2)
    return Dataset.from_arrays(X, ds.y)


def surrogate_dataset(seed: int = 0, jitter: float = 0.5) -> Dataset:
    """Stand-in for the published robot dataset: the default corpus plus logging jitter."""
    return logging_jitter(build_corpus(seed=seed), jitter, seed)
