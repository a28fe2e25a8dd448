"""Time each hot kernel through its numba path and its numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Both paths are imported side by side, so the env flag is not needed here.
"""
import argparse
import time
from pathlib import Path

import numpy as np

from navbot import _geometry
from navbot.dataset import read_csv
from navbot.learners import _kernels, fit_tree
from navbot.scenarios import build_scenario
from navbot.world import all_segments

DATA = Path(__file__).resolve().parent.parent / "data" / "paper_dataset.csv"


def best_of(fn, args, repeat):
    fn(*args)  # warm-up compiles the jit path
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    rng = np.random.default_rng(0)
    segs = all_segments(build_scenario("course", 0).world)
    origins = rng.uniform(0, 400, size=(12 * 200, 2))
    a = rng.uniform(0, 2 * np.pi, size=len(origins))
    dirs = np.column_stack([np.cos(a), np.sin(a)])
    ds = read_csv(DATA)
    X, y = ds.X, ds.y
    feats = np.arange(4, dtype=np.int64)
    tree = fit_tree(ds)
    tree_args = (tree.feature, tree.threshold, tree.left, tree.right, tree.leaf)
    Q = rng.uniform(5, 450, size=(500, 4))
    return [
        ("cast_rays (2400 rays)", _geometry.cast_rays_jit, _geometry._cast_rays_numpy, (segs, origins, dirs, 450.0)),
        ("best_split (root, n=%d)" % len(y), _kernels.best_split_jit, _kernels._best_split_numpy, (X, y, feats)),
        ("tree_predict (20k rows)", _kernels.tree_predict_jit, _kernels._tree_predict_numpy,
         (np.repeat(Q, 40, axis=0),) + tree_args),
        ("knn_predict (500 queries)", _kernels.knn_predict_jit, _kernels._knn_predict_numpy, (X, y, Q, 5)),
    ]


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    print(f"{'kernel':28s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>8s}")
    for name, jit_fn, np_fn, fn_args in cases():
        t_jit = best_of(jit_fn, fn_args, args.repeat)
        t_np = best_of(np_fn, fn_args, args.repeat)
        print(f"{name:28s} {t_jit:10.5f} {t_np:10.5f} {t_np / t_jit:8.1f}")


if __name__ == "__main__":
    main()
