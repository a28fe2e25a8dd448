"""Bagged random forest of CART trees with per-node feature subsampling."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from ..types import N_COMMANDS, Command, ScanVector
from .tree import N_FEATURES, FitError, TreeModel, TreeParams, _arrays, grow_tree


@dataclass
class ForestModel:
    trees: List[TreeModel]
    n_trees: int
    seed: int
    features_per_split: int = 2
    bootstrap: bool = True

    def predict_many(self, X) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64).reshape(-1, N_FEATURES)
        votes = np.zeros((X.shape[0], N_COMMANDS), dtype=np.int64)
        rows = np.arange(X.shape[0])
        for tree in self.trees:
            votes[rows, tree.predict_many(X)] += 1
        # argmax takes the first maximum, i.e. the lowest command
        return votes.argmax(axis=1)

    def predict(self, scan: ScanVector) -> Command:
        return Command(int(self.predict_many(np.array([scan]))[0]))

    def to_dict(self) -> dict:
        return {
            "params": {"n_trees": self.n_trees, "features_per_split": self.features_per_split,
                       "bootstrap": self.bootstrap, "tree": self.trees[0].to_dict()["params"]},
            "seed": self.seed,
            "trees": [t.to_dict()["nodes"] for t in self.trees],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ForestModel":
        p = d["params"]
        trees = [TreeModel.from_dict({"params": p["tree"], "nodes": nodes}) for nodes in d["trees"]]
        return cls(trees, p["n_trees"], d["seed"], p["features_per_split"], p["bootstrap"])


def fit_forest(train, n_trees: int = 100, master_seed: int = 0, features_per_split: int = 2,
               bootstrap: bool = True, params: TreeParams = TreeParams()) -> ForestModel:
    X, y = _arrays(train)
    if len(y) == 0:
        raise FitError("empty", "cannot fit a forest on zero samples")
    if n_trees < 1 or not 1 <= features_per_split <= N_FEATURES:
        raise ValueError("need n_trees >= 1 and 1 <= features_per_split <= 4")
    trees = []
    for child in np.random.SeedSequence(master_seed).spawn(n_trees):
        rng = np.random.default_rng(child)
        idx = rng.integers(0, len(y), len(y)) if bootstrap else np.arange(len(y))

        def choose(rng=rng):
            return np.sort(rng.choice(N_FEATURES, features_per_split, replace=False))

        trees.append(grow_tree(X[idx], y[idx], params, choose))
    return ForestModel(trees, n_trees, master_seed, features_per_split, bootstrap)


def predict_forest(model: ForestModel, scan: ScanVector) -> Command:
    return model.predict(scan)
