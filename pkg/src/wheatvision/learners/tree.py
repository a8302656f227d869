"""CART decision trees: Gini classification and variance-reduction regression.

Split search is greedy and exact: candidate thresholds are midpoints between
consecutive distinct sorted values of each dimension, the best (dim,
threshold) maximizes impurity decrease, and ties go to the lower dimension
then lower threshold. The decrease formula is pinned as

    parent_gini - (n_left/n) * gini_left - ... written as
    parent_gini - ((n_left/n) * gini_left + (n_right/n) * gini_right)

with gini = 1 - sum((count/n)^2), so an exhaustive enumeration using the
same expressions reproduces the chosen split bit-for-bit.
"""

import numpy as np

from ..errors import DimensionMismatch, EmptyTrainingSet

_NEWTON_EPS = 1e-12


def gini_from_counts(counts, n):
    return 1.0 - np.sum((counts / n) ** 2)


def _best_split_classification(X, y, n_classes, feature_dims):
    """Best (dim, threshold, decrease) or None when no split helps."""
    n = len(y)
    parent_counts = np.bincount(y, minlength=n_classes)
    parent = gini_from_counts(parent_counts, n)

    best = None  # (decrease, dim, threshold)
    one_hot = np.zeros((n, n_classes), dtype=np.float64)
    one_hot[np.arange(n), y] = 1.0
    for dim in feature_dims:
        col = X[:, dim]
        order = np.argsort(col, kind="stable")
        sv = col[order]
        boundaries = np.nonzero(sv[:-1] != sv[1:])[0]
        if len(boundaries) == 0:
            continue
        cum = one_hot[order].cumsum(axis=0)
        cl = cum[boundaries]
        cr = cum[-1] - cl
        nl = (boundaries + 1).astype(np.float64)
        nr = n - nl
        gl = 1.0 - np.sum((cl / nl[:, None]) ** 2, axis=1)
        gr = 1.0 - np.sum((cr / nr[:, None]) ** 2, axis=1)
        decreases = parent - ((nl / n) * gl + (nr / n) * gr)
        pos = int(np.argmax(decreases))  # first max: lowest threshold
        if best is None or decreases[pos] > best[0]:
            threshold = (sv[boundaries[pos]] + sv[boundaries[pos] + 1]) / 2.0
            best = (float(decreases[pos]), int(dim), float(threshold))
    return best


def _best_split_regression(X, t):
    """Minimize SSE via the equivalent maximization of sum^2/n per side."""
    n = len(t)
    total = t.sum()
    baseline = (total * total) / n
    best = None
    for dim in range(X.shape[1]):
        col = X[:, dim]
        order = np.argsort(col, kind="stable")
        sv = col[order]
        boundaries = np.nonzero(sv[:-1] != sv[1:])[0]
        if len(boundaries) == 0:
            continue
        cum = t[order].cumsum()
        sl = cum[boundaries]
        sr = total - sl
        nl = (boundaries + 1).astype(np.float64)
        nr = n - nl
        gains = sl * sl / nl + sr * sr / nr - baseline
        pos = int(np.argmax(gains))
        if best is None or gains[pos] > best[0]:
            threshold = (sv[boundaries[pos]] + sv[boundaries[pos] + 1]) / 2.0
            best = (float(gains[pos]), int(dim), float(threshold))
    return best


class DecisionTree:
    """Gini CART classifier over a fixed number of classes.

    nodes[i] is {"dim", "threshold", "left", "right"} for internal nodes or
    {"counts", "proba"} for leaves; node 0 is the root. x goes left when
    x[dim] <= threshold.
    """

    def __init__(self, max_depth=12, min_samples_split=2,
                 min_impurity_decrease=0.0):
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.min_impurity_decrease = min_impurity_decrease
        self.nodes = []
        self.n_classes = None
        self.n_features = None

    def fit(self, X, y, n_classes, rng=None, features_per_split=None):
        """Grow the tree; rng and features_per_split enable forest mode."""
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        if len(y) == 0:
            raise EmptyTrainingSet("no training samples")
        self.n_classes = n_classes
        self.n_features = X.shape[1]
        self.nodes = []
        self._grow(X, y, 0, rng, features_per_split)
        return self

    def _grow(self, X, y, depth, rng, features_per_split):
        index = len(self.nodes)
        self.nodes.append(None)
        counts = np.bincount(y, minlength=self.n_classes)
        n = len(y)

        split = None
        if depth < self.max_depth and n >= self.min_samples_split \
                and np.count_nonzero(counts) > 1:
            if features_per_split is not None and features_per_split < X.shape[1]:
                dims = sorted(rng.sample_without_replacement(X.shape[1],
                                                             features_per_split))
            else:
                dims = range(X.shape[1])
            split = _best_split_classification(X, y, self.n_classes, dims)
            if split is not None and split[0] <= self.min_impurity_decrease:
                split = None

        if split is None:
            self.nodes[index] = {"counts": counts.tolist(),
                                 "proba": (counts / n).tolist()}
            return index

        _, dim, threshold = split
        mask = X[:, dim] <= threshold
        # a float midpoint can collapse onto one of its endpoints; never
        # recurse on an empty side
        if mask.all() or not mask.any():
            self.nodes[index] = {"counts": counts.tolist(),
                                 "proba": (counts / n).tolist()}
            return index
        left = self._grow(X[mask], y[mask], depth + 1, rng, features_per_split)
        right = self._grow(X[~mask], y[~mask], depth + 1, rng, features_per_split)
        self.nodes[index] = {"dim": dim, "threshold": threshold,
                             "left": left, "right": right}
        return index

    def _leaf_for(self, x):
        node = self.nodes[0]
        while "dim" in node:
            node = self.nodes[node["left"] if x[node["dim"]] <= node["threshold"]
                              else node["right"]]
        return node

    def predict_proba(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(
                f"expected {self.n_features} features, got {X.shape[1]}")
        return np.array([self._leaf_for(x)["proba"] for x in X])

    @property
    def depth(self):
        return self._depth_of(0)

    def _depth_of(self, index):
        node = self.nodes[index]
        if "dim" not in node:
            return 0
        return 1 + max(self._depth_of(node["left"]), self._depth_of(node["right"]))

    def to_payload(self):
        return {"max_depth": self.max_depth,
                "min_samples_split": self.min_samples_split,
                "min_impurity_decrease": self.min_impurity_decrease,
                "n_classes": self.n_classes,
                "n_features": self.n_features,
                "nodes": self.nodes}

    @classmethod
    def from_payload(cls, payload):
        tree = cls(payload["max_depth"], payload["min_samples_split"],
                   payload["min_impurity_decrease"])
        tree.n_classes = payload["n_classes"]
        tree.n_features = payload["n_features"]
        tree.nodes = payload["nodes"]
        return tree


class RegressionTree:
    """Squared-error tree used as the boosting base learner.

    Leaf values are Newton steps: sum(residual) / sum(hessian) with the
    per-sample hessian supplied at fit time (zero-guarded).
    """

    def __init__(self, max_depth=3, min_samples_split=2):
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.nodes = []
        self.n_features = None

    def fit(self, X, residuals, hessians):
        X = np.asarray(X, dtype=np.float64)
        residuals = np.asarray(residuals, dtype=np.float64)
        hessians = np.asarray(hessians, dtype=np.float64)
        if len(residuals) == 0:
            raise EmptyTrainingSet("no training samples")
        self.n_features = X.shape[1]
        self.nodes = []
        self._grow(X, residuals, hessians, 0)
        return self

    def _grow(self, X, r, h, depth):
        index = len(self.nodes)
        self.nodes.append(None)

        split = None
        if depth < self.max_depth and len(r) >= self.min_samples_split:
            split = _best_split_regression(X, r)
            if split is not None and split[0] <= 0.0:
                split = None

        if split is None:
            denom = h.sum()
            value = float(r.sum() / denom) if denom > _NEWTON_EPS else 0.0
            self.nodes[index] = {"value": value}
            return index

        _, dim, threshold = split
        mask = X[:, dim] <= threshold
        if mask.all() or not mask.any():
            denom = h.sum()
            value = float(r.sum() / denom) if denom > _NEWTON_EPS else 0.0
            self.nodes[index] = {"value": value}
            return index
        left = self._grow(X[mask], r[mask], h[mask], depth + 1)
        right = self._grow(X[~mask], r[~mask], h[~mask], depth + 1)
        self.nodes[index] = {"dim": dim, "threshold": threshold,
                             "left": left, "right": right}
        return index

    def predict(self, X):
        X = np.asarray(X, dtype=np.float64)
        out = np.empty(len(X))
        for i, x in enumerate(X):
            node = self.nodes[0]
            while "dim" in node:
                node = self.nodes[node["left"] if x[node["dim"]] <= node["threshold"]
                                  else node["right"]]
            out[i] = node["value"]
        return out

    def to_payload(self):
        return {"max_depth": self.max_depth,
                "min_samples_split": self.min_samples_split,
                "n_features": self.n_features,
                "nodes": self.nodes}

    @classmethod
    def from_payload(cls, payload):
        tree = cls(payload["max_depth"], payload["min_samples_split"])
        tree.n_features = payload["n_features"]
        tree.nodes = payload["nodes"]
        return tree
