"""Random forest: bagged Gini trees with per-split feature subsampling."""

import math

import numpy as np

from ..errors import DimensionMismatch, EmptyTrainingSet
from ..rng import Rng
from .tree import DecisionTree


class RandomForest:
    """Average of bootstrapped trees, each limited to ceil(sqrt(d)) random
    dimensions per split by default.

    Tree t draws its bootstrap sample and split dimensions from an Rng
    substream derived as rng.split(t), so adding trees never perturbs the
    ones already grown. With bootstrap off and features_per_split covering
    every dimension the forest degenerates to identical copies of the plain
    CART fit, which the tests rely on.
    """

    def __init__(self, n_trees=100, max_depth=12, min_samples_split=2,
                 min_impurity_decrease=0.0, features_per_split="sqrt",
                 bootstrap=True, seed=0):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.min_impurity_decrease = min_impurity_decrease
        self.features_per_split = features_per_split
        self.bootstrap = bootstrap
        self.seed = seed
        self.trees = []
        self.n_classes = None
        self.n_features = None

    def _dims_per_split(self, d):
        if self.features_per_split == "sqrt":
            return int(math.ceil(math.sqrt(d)))
        if self.features_per_split is None:
            return d
        return int(self.features_per_split)

    def fit(self, X, y, n_classes):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        if len(y) == 0:
            raise EmptyTrainingSet("no training samples")
        self.n_classes = n_classes
        self.n_features = X.shape[1]
        n = len(y)
        m = self._dims_per_split(self.n_features)
        root = Rng(self.seed)
        self.trees = []
        for t in range(self.n_trees):
            rng = root.split("tree", t)
            if self.bootstrap:
                idx = np.array([rng.randint(n) for _ in range(n)], dtype=np.int64)
                Xt, yt = X[idx], y[idx]
            else:
                Xt, yt = X, y
            tree = DecisionTree(self.max_depth, self.min_samples_split,
                                self.min_impurity_decrease)
            tree.fit(Xt, yt, n_classes, rng=rng,
                     features_per_split=m if m < self.n_features else None)
            self.trees.append(tree)
        return self

    def predict_proba(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(
                f"expected {self.n_features} features, got {X.shape[1]}")
        acc = np.zeros((len(X), self.n_classes))
        for tree in self.trees:
            acc += tree.predict_proba(X)
        return acc / len(self.trees)

    def to_payload(self):
        return {"n_trees": self.n_trees,
                "max_depth": self.max_depth,
                "min_samples_split": self.min_samples_split,
                "min_impurity_decrease": self.min_impurity_decrease,
                "features_per_split": self.features_per_split,
                "bootstrap": self.bootstrap,
                "seed": self.seed,
                "n_classes": self.n_classes,
                "n_features": self.n_features,
                "trees": [tree.to_payload() for tree in self.trees]}

    @classmethod
    def from_payload(cls, payload):
        forest = cls(payload["n_trees"], payload["max_depth"],
                     payload["min_samples_split"],
                     payload["min_impurity_decrease"],
                     payload["features_per_split"], payload["bootstrap"],
                     payload["seed"])
        forest.n_classes = payload["n_classes"]
        forest.n_features = payload["n_features"]
        forest.trees = [DecisionTree.from_payload(p) for p in payload["trees"]]
        return forest
