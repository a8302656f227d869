"""Multiclass gradient boosting with softmax loss and regression trees."""

import numpy as np

from ..errors import DimensionMismatch, EmptyTrainingSet
from .tree import RegressionTree

_PRIOR_FLOOR = 1e-12


def softmax(scores):
    shifted = scores - scores.max(axis=1, keepdims=True)
    ex = np.exp(shifted)
    return ex / ex.sum(axis=1, keepdims=True)


def log_loss(proba, y):
    """Mean negative log-likelihood of the true classes."""
    picked = proba[np.arange(len(y)), y]
    return float(-np.mean(np.log(np.maximum(picked, _PRIOR_FLOOR))))


class GradientBoosting:
    """Additive model: per-class raw scores start at log priors and each
    round adds learning_rate times one regression tree per class.

    Trees fit the softmax residual (one-hot minus probability) and use
    Newton leaf values with hessian p*(1-p). train_losses records the
    training log-loss after every round so monotone descent is checkable.
    """

    def __init__(self, n_rounds=100, learning_rate=0.1, max_depth=3,
                 min_samples_split=2):
        self.n_rounds = n_rounds
        self.learning_rate = learning_rate
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.init_scores = None
        self.rounds = []
        self.train_losses = []
        self.n_classes = None
        self.n_features = None

    def fit(self, X, y, n_classes):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        n = len(y)
        if n == 0:
            raise EmptyTrainingSet("no training samples")
        self.n_classes = n_classes
        self.n_features = X.shape[1]

        priors = np.bincount(y, minlength=n_classes) / n
        self.init_scores = np.log(np.maximum(priors, _PRIOR_FLOOR))
        scores = np.tile(self.init_scores, (n, 1))
        one_hot = np.zeros((n, n_classes))
        one_hot[np.arange(n), y] = 1.0

        self.rounds = []
        self.train_losses = []
        for _ in range(self.n_rounds):
            proba = softmax(scores)
            residual = one_hot - proba
            hessian = proba * (1.0 - proba)
            stage = []
            for k in range(n_classes):
                tree = RegressionTree(self.max_depth, self.min_samples_split)
                tree.fit(X, residual[:, k], hessian[:, k])
                scores[:, k] += self.learning_rate * tree.predict(X)
                stage.append(tree)
            self.rounds.append(stage)
            self.train_losses.append(log_loss(softmax(scores), y))
        return self

    def _raw_scores(self, X):
        scores = np.tile(self.init_scores, (len(X), 1))
        for stage in self.rounds:
            for k, tree in enumerate(stage):
                scores[:, k] += self.learning_rate * tree.predict(X)
        return scores

    def predict_proba(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(
                f"expected {self.n_features} features, got {X.shape[1]}")
        return softmax(self._raw_scores(X))

    def to_payload(self):
        return {"n_rounds": self.n_rounds,
                "learning_rate": self.learning_rate,
                "max_depth": self.max_depth,
                "min_samples_split": self.min_samples_split,
                "n_classes": self.n_classes,
                "n_features": self.n_features,
                "init_scores": self.init_scores.tolist(),
                "train_losses": self.train_losses,
                "rounds": [[tree.to_payload() for tree in stage]
                           for stage in self.rounds]}

    @classmethod
    def from_payload(cls, payload):
        model = cls(payload["n_rounds"], payload["learning_rate"],
                    payload["max_depth"], payload["min_samples_split"])
        model.n_classes = payload["n_classes"]
        model.n_features = payload["n_features"]
        model.init_scores = np.array(payload["init_scores"])
        model.train_losses = list(payload["train_losses"])
        model.rounds = [[RegressionTree.from_payload(p) for p in stage]
                        for stage in payload["rounds"]]
        return model
