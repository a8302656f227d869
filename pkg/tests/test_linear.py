import numpy as np
import pytest

from wheatvision.errors import DimensionMismatch, EmptyTrainingSet
from wheatvision.learners.linear import (LogisticRegression, logistic_gradients,
                                         logistic_loss)
from wheatvision.rng import Rng

from oracles import finite_difference_gradient


def _one_hot(y, k):
    out = np.zeros((len(y), k))
    out[np.arange(len(y)), y] = 1.0
    return out


def _problem(n=40, d=3, k=3, seed=9):
    rng = Rng(seed)
    X = rng.uniform_array((n, d)) * 2 - 1
    y = np.array([rng.randint(k) for _ in range(n)], dtype=np.int64)
    W = (rng.uniform_array((d, k)) - 0.5) * 0.8
    b = (rng.uniform_array((k,)) - 0.5) * 0.2
    return X, y, W, b


def test_gradient_matches_finite_differences():
    X, y, W, b = _problem()
    one_hot = _one_hot(y, 3)
    for l2 in (0.0, 1e-2):
        gW, gb = logistic_gradients(W, b, X, one_hot, l2)
        numW = finite_difference_gradient(
            lambda M: logistic_loss(M, b, X, one_hot, l2), W)
        numb = finite_difference_gradient(
            lambda v: logistic_loss(W, v, X, one_hot, l2), b)
        np.testing.assert_allclose(gW, numW, rtol=1e-6, atol=1e-9)
        np.testing.assert_allclose(gb, numb, rtol=1e-6, atol=1e-9)


def test_l2_leaves_bias_gradient_alone():
    X, y, W, b = _problem(seed=12)
    one_hot = _one_hot(y, 3)
    _, gb_plain = logistic_gradients(W, b, X, one_hot, 0.0)
    gW_l2, gb_l2 = logistic_gradients(W, b, X, one_hot, 0.5)
    gW_plain, _ = logistic_gradients(W, b, X, one_hot, 0.0)
    np.testing.assert_array_equal(gb_plain, gb_l2)
    np.testing.assert_allclose(gW_l2 - gW_plain, 0.5 * W, atol=1e-15)


def test_loss_penalty_excludes_bias():
    X, y, W, b = _problem(seed=13)
    one_hot = _one_hot(y, 3)
    base = logistic_loss(W, b, X, one_hot, 0.0)
    with_l2 = logistic_loss(W, b, X, one_hot, 0.2)
    assert with_l2 == pytest.approx(base + 0.1 * np.sum(W * W), abs=1e-12)


def test_training_loss_decreases():
    X, y, _, _ = _problem(n=80, seed=15)
    model = LogisticRegression(step=0.1, n_iterations=120)
    model.fit(X, y, 3)
    losses = model.train_losses
    assert len(losses) == 120
    for earlier, later in zip(losses[:100], losses[1:101]):
        assert later < earlier


def test_separable_data_high_accuracy():
    rng = Rng(19)
    X = rng.uniform_array((90, 2)) * 2 - 1
    y = (X[:, 0] > 0).astype(np.int64) + 2 * (X[:, 1] > 0).astype(np.int64)
    model = LogisticRegression(step=0.5, n_iterations=800, l2=1e-5)
    model.fit(X, y, 4)
    acc = np.mean(np.argmax(model.predict_proba(X), axis=1) == y)
    assert acc >= 0.95


def test_zero_init_first_probe_uniform():
    X, y, _, _ = _problem(seed=20)
    model = LogisticRegression(n_iterations=0)
    model.fit(X, y, 3)
    np.testing.assert_allclose(model.predict_proba(X), 1.0 / 3.0, atol=1e-15)


def test_payload_round_trip():
    X, y, _, _ = _problem(seed=22)
    model = LogisticRegression(step=0.2, n_iterations=60)
    model.fit(X, y, 3)
    restored = LogisticRegression.from_payload(model.to_payload())
    np.testing.assert_array_equal(restored.predict_proba(X),
                                  model.predict_proba(X))


def test_validation_errors():
    model = LogisticRegression()
    with pytest.raises(EmptyTrainingSet):
        model.fit(np.empty((0, 2)), np.empty(0, dtype=np.int64), 2)
    X, y, _, _ = _problem()
    model.fit(X, y, 3)
    with pytest.raises(DimensionMismatch):
        model.predict_proba(np.zeros((1, 7)))
