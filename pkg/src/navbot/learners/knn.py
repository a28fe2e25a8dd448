"""Brute-force k-nearest-neighbours over the four raw distance channels."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..types import Command, ScanVector
from . import _kernels
from .tree import N_FEATURES, FitError, _arrays


@dataclass
class KnnModel:
    X: np.ndarray
    y: np.ndarray
    k: int = 5

    def predict_many(self, Q) -> np.ndarray:
        Q = np.ascontiguousarray(Q, dtype=np.float64).reshape(-1, N_FEATURES)
        return _kernels.knn_predict_kernel(self.X, self.y, Q, self.k)

    def predict(self, scan: ScanVector) -> Command:
        return Command(int(self.predict_many(np.array([scan]))[0]))

    def to_dict(self) -> dict:
        return {"params": {"k": self.k},
                "samples": [[*map(float, row), Command(int(c)).label] for row, c in zip(self.X, self.y)]}

    @classmethod
    def from_dict(cls, d: dict) -> "KnnModel":
        rows = d["samples"]
        X = np.array([r[:4] for r in rows], dtype=np.float64).reshape(-1, N_FEATURES)
        y = np.array([Command.from_label(r[4]) for r in rows], dtype=np.int64)
        return cls(X, y, d["params"]["k"])


def fit_knn(train, k: int = 5) -> KnnModel:
    X, y = _arrays(train)
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > len(y):
        raise FitError("k_too_large", f"k={k} exceeds {len(y)} training samples")
    return KnnModel(X.copy(), y.copy(), k)


def predict_knn(model: KnnModel, scan: ScanVector) -> Command:
    return model.predict(scan)
