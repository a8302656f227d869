import json

import numpy as np
import pytest

from wheatvision.errors import DimensionMismatch, EmptyTrainingSet
from wheatvision.learners.boosting import GradientBoosting, log_loss, softmax
from wheatvision.rng import Rng


def _three_class(n=90, seed=17):
    rng = Rng(seed)
    X = rng.uniform_array((n, 4)) * 2 - 1
    y = np.zeros(n, dtype=np.int64)
    y[X[:, 0] > 0.2] = 1
    y[X[:, 1] > 0.4] = 2
    return X, y


def test_softmax_rows_normalize():
    rng = Rng(2)
    scores = (rng.uniform_array((40, 5)) - 0.5) * 200  # large, tests shifting
    p = softmax(scores)
    np.testing.assert_allclose(p.sum(axis=1), 1.0, atol=1e-12)
    assert (p > 0).all()
    np.testing.assert_allclose(softmax(np.zeros((2, 4))), 0.25)


def test_log_loss_matches_hand_value():
    proba = np.array([[0.8, 0.2], [0.3, 0.7]])
    y = np.array([0, 1])
    expected = -(np.log(0.8) + np.log(0.7)) / 2
    assert log_loss(proba, y) == pytest.approx(expected, abs=1e-15)


def test_zero_learning_rate_predicts_priors():
    X, y = _three_class()
    model = GradientBoosting(n_rounds=1, learning_rate=0.0)
    model.fit(X, y, 3)
    priors = np.bincount(y, minlength=3) / len(y)
    proba = model.predict_proba(X)
    np.testing.assert_allclose(proba, np.tile(priors, (len(X), 1)), atol=1e-12)


def test_init_scores_are_log_priors():
    X, y = _three_class()
    model = GradientBoosting(n_rounds=1, learning_rate=0.1)
    model.fit(X, y, 3)
    priors = np.bincount(y, minlength=3) / len(y)
    np.testing.assert_allclose(model.init_scores, np.log(priors), atol=1e-15)


def test_training_loss_decreases():
    X, y = _three_class()
    model = GradientBoosting(n_rounds=40, learning_rate=0.2, max_depth=3)
    model.fit(X, y, 3)
    losses = model.train_losses
    assert len(losses) == 40
    assert losses[-1] < losses[0]
    for earlier, later in zip(losses[:-1], losses[1:]):
        assert later <= earlier + 1e-6


def test_probas_sum_to_one():
    X, y = _three_class()
    model = GradientBoosting(n_rounds=15, learning_rate=0.3)
    model.fit(X, y, 3)
    proba = model.predict_proba(X)
    np.testing.assert_allclose(proba.sum(axis=1), 1.0, atol=1e-12)
    assert (proba >= 0).all()


def test_fits_separable_data_well():
    X, y = _three_class()
    model = GradientBoosting(n_rounds=40, learning_rate=0.3, max_depth=3)
    model.fit(X, y, 3)
    acc = np.mean(np.argmax(model.predict_proba(X), axis=1) == y)
    assert acc >= 0.95


def test_payload_round_trip_and_determinism():
    X, y = _three_class()
    a = GradientBoosting(n_rounds=10, learning_rate=0.2)
    a.fit(X, y, 3)
    b = GradientBoosting(n_rounds=10, learning_rate=0.2)
    b.fit(X, y, 3)
    assert json.dumps(a.to_payload(), sort_keys=True) == \
        json.dumps(b.to_payload(), sort_keys=True)

    restored = GradientBoosting.from_payload(a.to_payload())
    np.testing.assert_array_equal(restored.predict_proba(X),
                                  a.predict_proba(X))
    assert restored.train_losses == a.train_losses


def test_validation_errors():
    model = GradientBoosting(n_rounds=2)
    with pytest.raises(EmptyTrainingSet):
        model.fit(np.empty((0, 2)), np.empty(0, dtype=np.int64), 2)
    X, y = _three_class(n=30)
    model.fit(X, y, 3)
    with pytest.raises(DimensionMismatch):
        model.predict_proba(np.zeros((1, 9)))
