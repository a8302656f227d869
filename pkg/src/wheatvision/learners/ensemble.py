"""Voting and stacking ensembles over heterogeneous base classifiers."""

from dataclasses import dataclass

import numpy as np

from ..dataset import stratified_fold_indices
from ..errors import ClassSetMismatch, DimensionMismatch, EmptyTrainingSet
from ..rng import derive_seed
from .linear import LogisticRegression


@dataclass(frozen=True)
class ModelSpec:
    """Recipe for an unfitted base model: factory(seed) -> model.

    Deterministic learners may ignore the seed; it exists so stacking can
    hand every (fold, base) fit an independent stream.
    """
    name: str
    factory: object

    def build(self, seed):
        return self.factory(seed)


class VotingEnsemble:
    """Combines already-fitted bases; no training of its own.

    Hard mode: each base votes for its argmax class (ties toward the lowest
    class id) and the output is the one-hot of the majority, again breaking
    ties toward the lowest class id. Soft mode: mean of base probabilities.
    """

    def __init__(self, bases, mode="hard"):
        if len(bases) < 2:
            raise ClassSetMismatch(f"need >= 2 base models, got {len(bases)}")
        if mode not in ("hard", "soft"):
            raise ClassSetMismatch(f"unknown voting mode {mode!r}")
        classes = {base.n_classes for base in bases}
        if len(classes) != 1:
            raise ClassSetMismatch(f"bases disagree on class count: {classes}")
        features = {base.n_features for base in bases}
        if len(features) != 1:
            raise ClassSetMismatch(
                f"bases disagree on feature count: {features}")
        self.bases = list(bases)
        self.mode = mode
        self.n_classes = classes.pop()
        self.n_features = features.pop()

    def predict_proba(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(
                f"expected {self.n_features} features, got {X.shape[1]}")
        probas = [base.predict_proba(X) for base in self.bases]
        if self.mode == "soft":
            return np.mean(probas, axis=0)
        votes = np.zeros((len(X), self.n_classes))
        for p in probas:
            votes[np.arange(len(X)), np.argmax(p, axis=1)] += 1.0
        out = np.zeros_like(votes)
        out[np.arange(len(X)), np.argmax(votes, axis=1)] = 1.0
        return out


class StackingEnsemble:
    """Two-level model: a logistic meta-learner over base probabilities.

    Training follows the out-of-fold protocol: stratified k folds; for each
    fold every base is fit on the other k-1 folds and predicts the held-out
    part, so no meta-feature row was seen by the model that produced it.
    The bases are then refit on all training data for inference.
    """

    def __init__(self, specs, k=5, seed=0, meta_step=0.1,
                 meta_iterations=2000, meta_l2=1e-4):
        if len(specs) < 1:
            raise ClassSetMismatch("need >= 1 base spec")
        self.specs = list(specs)
        self.k = k
        self.seed = seed
        self.meta_step = meta_step
        self.meta_iterations = meta_iterations
        self.meta_l2 = meta_l2
        self.bases = []
        self.meta = None
        self.n_classes = None
        self.n_features = None
        self.oof_features = None  # kept for protocol audits

    def fit(self, X, y, n_classes):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        n = len(y)
        if n == 0:
            raise EmptyTrainingSet("no training samples")
        self.n_classes = n_classes
        self.n_features = X.shape[1]

        folds = stratified_fold_indices(y, n_classes, self.k, self.seed)
        oof = np.zeros((n, len(self.specs) * n_classes))
        for f, held_out in enumerate(folds):
            train_idx = np.sort(np.concatenate(
                [folds[g] for g in range(self.k) if g != f]))
            for b, spec in enumerate(self.specs):
                model = spec.build(derive_seed(self.seed, "fold", f, "base", b))
                model.fit(X[train_idx], y[train_idx], n_classes)
                oof[held_out, b * n_classes:(b + 1) * n_classes] = \
                    model.predict_proba(X[held_out])
        self.oof_features = oof

        self.meta = LogisticRegression(self.meta_step, self.meta_iterations,
                                       self.meta_l2)
        self.meta.fit(oof, y, n_classes)

        self.bases = []
        for b, spec in enumerate(self.specs):
            model = spec.build(derive_seed(self.seed, "final", b))
            model.fit(X, y, n_classes)
            self.bases.append(model)
        return self

    def meta_features(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(
                f"expected {self.n_features} features, got {X.shape[1]}")
        return np.hstack([base.predict_proba(X) for base in self.bases])

    def predict_proba(self, X):
        return self.meta.predict_proba(self.meta_features(X))


def predict_classes(model, X):
    """Argmax class per row; ties go to the lowest class id."""
    return np.argmax(model.predict_proba(X), axis=1)
