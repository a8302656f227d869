"""Classifiers: CART trees, random forests, gradient boosting, and the
voting / stacking ensembles built from them."""

import numpy as np

from ..errors import DimensionMismatch, PipelineError
from ..rng import derive_seed
from .boosting import GradientBoosting, log_loss, softmax
from .ensemble import (ModelSpec, StackingEnsemble, VotingEnsemble,
                       predict_classes)
from .forest import RandomForest
from .io import (ModelBundle, load_model, pack_model, save_model,
                 unpack_model)
from .linear import LogisticRegression, logistic_gradients, logistic_loss
from .tree import DecisionTree, RegressionTree

MODEL_KINDS = ("tree", "forest", "gbm", "voting", "stacking")


def tree_spec(config):
    return ModelSpec("tree", lambda seed: DecisionTree(
        config.tree_max_depth, config.tree_min_samples_split,
        config.tree_min_impurity_decrease))


def forest_spec(config):
    return ModelSpec("forest", lambda seed: RandomForest(
        config.forest_trees, config.tree_max_depth,
        config.tree_min_samples_split, config.tree_min_impurity_decrease,
        seed=seed))


def gbm_spec(config):
    return ModelSpec("gbm", lambda seed: GradientBoosting(
        config.gbm_rounds, config.gbm_learning_rate, config.gbm_max_depth,
        config.tree_min_samples_split))


def default_base_specs(config):
    """Tree, forest, and boosting bases for the ensemble kinds."""
    return [tree_spec(config), forest_spec(config), gbm_spec(config)]


def train_model(kind, X, y, n_classes, config):
    """Fit a model of the given kind with hyperparameters from config."""
    if kind == "tree":
        return tree_spec(config).build(0).fit(X, y, n_classes)
    if kind == "forest":
        seed = derive_seed(config.seed, "forest")
        return forest_spec(config).build(seed).fit(X, y, n_classes)
    if kind == "gbm":
        return gbm_spec(config).build(0).fit(X, y, n_classes)
    if kind == "voting":
        bases = []
        for b, spec in enumerate(default_base_specs(config)):
            seed = derive_seed(config.seed, "voting", b)
            bases.append(spec.build(seed).fit(X, y, n_classes))
        return VotingEnsemble(bases, config.voting_mode)
    if kind == "stacking":
        model = StackingEnsemble(default_base_specs(config),
                                 k=config.stacking_folds,
                                 seed=derive_seed(config.seed, "stacking"),
                                 meta_step=config.meta_step,
                                 meta_iterations=config.meta_iterations,
                                 meta_l2=config.meta_l2)
        return model.fit(X, y, n_classes)
    raise PipelineError(f"unknown model kind {kind!r}")


def predict_one(model, x):
    """Class probabilities for a single feature vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or len(x) != model.n_features:
        raise DimensionMismatch(
            f"expected a vector of {model.n_features} features")
    return model.predict_proba(x[None, :])[0]
