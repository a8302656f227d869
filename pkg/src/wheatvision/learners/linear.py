"""Multinomial logistic regression trained by full-batch gradient descent.

The loss and gradient live in standalone functions so a finite-difference
check can probe them directly; the model class just iterates them.
"""

import numpy as np

from ..errors import DimensionMismatch, EmptyTrainingSet
from .boosting import softmax


def logistic_loss(W, b, X, one_hot, l2):
    """Mean cross-entropy plus (l2/2)*||W||^2; the bias is unpenalized."""
    proba = softmax(X @ W + b)
    picked = np.sum(proba * one_hot, axis=1)
    data = -np.mean(np.log(np.maximum(picked, 1e-300)))
    return float(data + 0.5 * l2 * np.sum(W * W))


def logistic_gradients(W, b, X, one_hot, l2):
    n = len(X)
    diff = softmax(X @ W + b) - one_hot
    grad_w = X.T @ diff / n + l2 * W
    grad_b = diff.sum(axis=0) / n
    return grad_w, grad_b


class LogisticRegression:
    """Softmax classifier; weights start at zero and follow plain gradient
    descent with a fixed step, which is convex so the recorded train_losses
    must decrease monotonically."""

    def __init__(self, step=0.1, n_iterations=2000, l2=1e-4):
        self.step = step
        self.n_iterations = n_iterations
        self.l2 = l2
        self.weights = None
        self.bias = None
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
        one_hot = np.zeros((n, n_classes))
        one_hot[np.arange(n), y] = 1.0

        W = np.zeros((self.n_features, n_classes))
        b = np.zeros(n_classes)
        self.train_losses = []
        for _ in range(self.n_iterations):
            grad_w, grad_b = logistic_gradients(W, b, X, one_hot, self.l2)
            W -= self.step * grad_w
            b -= self.step * grad_b
            self.train_losses.append(logistic_loss(W, b, X, one_hot, self.l2))
        self.weights = W
        self.bias = b
        return self

    def predict_proba(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(
                f"expected {self.n_features} features, got {X.shape[1]}")
        return softmax(X @ self.weights + self.bias)

    def to_payload(self):
        return {"step": self.step,
                "n_iterations": self.n_iterations,
                "l2": self.l2,
                "n_classes": self.n_classes,
                "n_features": self.n_features,
                "weights": self.weights.tolist(),
                "bias": self.bias.tolist(),
                "train_losses": self.train_losses}

    @classmethod
    def from_payload(cls, payload):
        model = cls(payload["step"], payload["n_iterations"], payload["l2"])
        model.n_classes = payload["n_classes"]
        model.n_features = payload["n_features"]
        model.weights = np.array(payload["weights"])
        model.bias = np.array(payload["bias"])
        model.train_losses = list(payload["train_losses"])
        return model
