"""CART decision tree with Gini impurity and midpoint thresholds."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from ..types import N_COMMANDS, Command, ScanVector
from . import _kernels

N_FEATURES = 4
# splits must beat the parent impurity by more than float noise
IMPROVEMENT_EPS = 1e-12


class FitError(ValueError):
    def __init__(self, kind: str, detail: str = ""):
        super().__init__(f"{kind}: {detail}" if detail else kind)
        self.kind = kind


def gini(class_counts: Sequence[int]) -> float:
    counts = np.asarray(class_counts, dtype=np.int64)
    total = int(counts.sum())
    if total <= 0:
        raise ValueError("gini of an empty node is undefined")
    return 1.0 - float(((counts / total) ** 2).sum())


def best_split(X, y, allowed_features: Optional[Sequence[int]] = None) -> Optional[Tuple[int, float, float]]:
    """Lowest weighted-Gini (feature, threshold) split, or None if nothing helps.

    Ties go to the lower feature index, then the lower threshold.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.int64)
    if X.shape[0] < 2:
        return None
    feats = np.array(sorted(range(X.shape[1]) if allowed_features is None else allowed_features), dtype=np.int64)
    counts = np.bincount(y, minlength=N_COMMANDS)
    if np.count_nonzero(counts) <= 1:
        return None
    f, thr, g = _kernels.best_split_kernel(X, y, feats)
    n = X.shape[0]
    parent = 1.0 - float((counts * counts).sum()) / n / n
    if f < 0 or not g < parent - IMPROVEMENT_EPS:
        return None
    return int(f), float(thr), float(g)


@dataclass(frozen=True)
class TreeParams:
    max_depth: int = 16
    min_samples_split: int = 2


@dataclass
class TreeModel:
    """Flat node arrays; node 0 is the root and ``leaf >= 0`` marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    leaf: np.ndarray
    params: TreeParams = field(default_factory=TreeParams)

    @property
    def n_nodes(self) -> int:
        return len(self.leaf)

    def depth(self) -> int:
        best, stack = 0, [(0, 0)]
        while stack:
            node, d = stack.pop()
            best = max(best, d)
            if self.leaf[node] < 0:
                stack += [(self.left[node], d + 1), (self.right[node], d + 1)]
        return best

    def predict_many(self, X) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64).reshape(-1, N_FEATURES)
        return _kernels.tree_predict_kernel(X, self.feature, self.threshold, self.left, self.right, self.leaf)

    def predict(self, scan: ScanVector) -> Command:
        return Command(int(self.predict_many(np.array([scan]))[0]))

    def to_dict(self) -> dict:
        nodes = []
        for i in range(self.n_nodes):
            if self.leaf[i] >= 0:
                nodes.append({"leaf": Command(int(self.leaf[i])).label})
            else:
                nodes.append({"feature": int(self.feature[i]), "threshold": float(self.threshold[i]),
                              "left": int(self.left[i]), "right": int(self.right[i])})
        return {"params": {"max_depth": self.params.max_depth,
                           "min_samples_split": self.params.min_samples_split},
                "nodes": nodes}

    @classmethod
    def from_dict(cls, d: dict) -> "TreeModel":
        nodes = d["nodes"]
        n = len(nodes)
        feature = np.full(n, -1, dtype=np.int64)
        threshold = np.zeros(n)
        left = np.full(n, -1, dtype=np.int64)
        right = np.full(n, -1, dtype=np.int64)
        leaf = np.full(n, -1, dtype=np.int64)
        for i, node in enumerate(nodes):
            if "leaf" in node:
                leaf[i] = Command.from_label(node["leaf"])
            else:
                feature[i] = node["feature"]
                threshold[i] = node["threshold"]
                left[i] = node["left"]
                right[i] = node["right"]
        return cls(feature, threshold, left, right, leaf, TreeParams(**d.get("params", {})))


def majority(y: np.ndarray) -> int:
    return int(np.argmax(np.bincount(y, minlength=N_COMMANDS)))


def grow_tree(X: np.ndarray, y: np.ndarray, params: TreeParams, choose_features=None) -> TreeModel:
    """Grow depth-first; ``choose_features()`` returns the candidate features per node."""
    feature, threshold, left, right, leaf = [], [], [], [], []

    def new_node():
        for arr, v in ((feature, -1), (threshold, 0.0), (left, -1), (right, -1), (leaf, -1)):
            arr.append(v)
        return len(leaf) - 1

    root = new_node()
    stack = [(root, np.arange(len(y)), 0)]
    while stack:
        node, idx, depth = stack.pop()
        ys = y[idx]
        split = None
        if depth < params.max_depth and len(idx) >= params.min_samples_split:
            feats = None if choose_features is None else choose_features()
            split = best_split(X[idx], ys, feats)
        if split is None:
            leaf[node] = majority(ys)
            continue
        f, thr, _ = split
        go_left = X[idx, f] < thr
        li, ri = new_node(), new_node()
        feature[node], threshold[node], left[node], right[node] = f, thr, li, ri
        # right pushed first so the left subtree is numbered first
        stack.append((ri, idx[~go_left], depth + 1))
        stack.append((li, idx[go_left], depth + 1))
    return TreeModel(np.array(feature, dtype=np.int64), np.array(threshold, dtype=np.float64),
                     np.array(left, dtype=np.int64), np.array(right, dtype=np.int64),
                     np.array(leaf, dtype=np.int64), params)


def _arrays(train):
    X, y = (train.X, train.y) if hasattr(train, "samples") else train
    return np.ascontiguousarray(X, dtype=np.float64), np.ascontiguousarray(y, dtype=np.int64)


def fit_tree(train, params: TreeParams = TreeParams()) -> TreeModel:
    X, y = _arrays(train)
    if len(y) == 0:
        raise FitError("empty", "cannot fit a tree on zero samples")
    return grow_tree(X, y, params)


def predict_tree(model: TreeModel, scan: ScanVector) -> Command:
    return model.predict(scan)
