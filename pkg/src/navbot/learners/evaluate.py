"""Accuracy, fit-time benchmarking and JSON model persistence."""
from __future__ import annotations

import json
import statistics
import time
from pathlib import Path
from typing import Callable, Union

import numpy as np

from ..types import Command
from .forest import ForestModel, fit_forest
from .knn import KnnModel, fit_knn
from .tree import TreeModel, TreeParams, fit_tree

Model = Union[TreeModel, ForestModel, KnnModel]
ALGORITHMS = ("tree", "forest", "knn")
LABEL_ORDER = [c.label for c in Command]


def accuracy(predict_fn: Callable, ds) -> float:
    """Fraction of samples whose label ``predict_fn`` reproduces.

    ``predict_fn`` may be a model (batch ``predict_many`` is used) or a
    per-scan callable.
    """
    if len(ds) == 0:
        raise ValueError("accuracy of an empty dataset is undefined")
    if hasattr(predict_fn, "predict_many"):
        pred = predict_fn.predict_many(ds.X)
    else:
        pred = np.array([int(predict_fn(s.scan)) for s in ds])
    return float(np.mean(pred == ds.y))


def fit(algorithm: str, train, seed: int = 0, **params) -> Model:
    if algorithm == "tree":
        return fit_tree(train, TreeParams(**params))
    if algorithm == "forest":
        return fit_forest(train, master_seed=seed, **params)
    if algorithm == "knn":
        return fit_knn(train, **params)
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


def model_to_dict(model: Model) -> dict:
    algo = {TreeModel: "tree", ForestModel: "forest", KnnModel: "knn"}[type(model)]
    d = {"algorithm": algo, "label_order": LABEL_ORDER, "seed": getattr(model, "seed", None)}
    d.update(model.to_dict())
    return d


def model_from_dict(d: dict) -> Model:
    if d.get("label_order", LABEL_ORDER) != LABEL_ORDER:
        raise ValueError(f"unsupported label order {d['label_order']}")
    cls = {"tree": TreeModel, "forest": ForestModel, "knn": KnnModel}[d["algorithm"]]
    return cls.from_dict(d)


def dumps_model(model: Model) -> str:
    return json.dumps(model_to_dict(model), sort_keys=True)


def save_model(path, model: Model) -> None:
    Path(path).write_text(dumps_model(model) + "\n")


def load_model(path) -> Model:
    return model_from_dict(json.loads(Path(path).read_text()))


def benchmark_fit(algorithm: str, train, repetitions: int = 5, seed: int = 0, **params) -> float:
    """Median wall-clock fit time in seconds.

    One untimed warm-up fit compiles the kernels first. Every timed fit must
    serialise identically; a mismatch raises ``RuntimeError``.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    reference = dumps_model(fit(algorithm, train, seed, **params))
    times = []
    for _ in range(repetitions):
        t0 = time.perf_counter()
        model = fit(algorithm, train, seed, **params)
        times.append(time.perf_counter() - t0)
        if dumps_model(model) != reference:
            raise RuntimeError(f"{algorithm} fit is not reproducible")
    return statistics.median(times)
