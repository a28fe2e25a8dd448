from .evaluate import (ALGORITHMS, accuracy, benchmark_fit, dumps_model, fit, load_model,
                       model_from_dict, model_to_dict, save_model)
from .forest import ForestModel, fit_forest, predict_forest
from .knn import KnnModel, fit_knn, predict_knn
from .tree import FitError, TreeModel, TreeParams, best_split, fit_tree, gini, predict_tree

__all__ = [
    "ALGORITHMS", "FitError", "ForestModel", "KnnModel", "TreeModel", "TreeParams",
    "accuracy", "benchmark_fit", "best_split", "dumps_model", "fit", "fit_forest", "fit_knn",
    "fit_tree", "gini", "load_model", "model_from_dict", "model_to_dict", "predict_forest",
    "predict_knn", "predict_tree", "save_model",
]
