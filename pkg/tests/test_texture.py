import csv

import numpy as np
import pytest

from oracles import glcm_reference
from wheatvision.errors import NoValidPairs
from wheatvision.rng import Rng
from wheatvision.segmentation import extract_roi, threshold_segment
from wheatvision.texture import (DIRECTIONS_4, GlcmMatrix, compute_glcm,
                                 glcm_to_csv, marginals, quantize,
                                 textural_features)

from conftest import make_gray


def _random_gray(rng, h, w):
    return make_gray(np.floor(rng.uniform_array((h, w)) * 256))


def _glcm_from_p(p, levels):
    p = np.asarray(p, dtype=np.float64)
    return GlcmMatrix(levels=levels, counts=np.zeros_like(p, dtype=np.int64),
                      p=p, distance=1, directions=DIRECTIONS_4)


# ---- quantization -----------------------------------------------------------

def test_quantize_boundaries():
    v = np.array([0, 15, 16, 255], dtype=np.uint8)
    np.testing.assert_array_equal(quantize(v, 16), [0, 0, 1, 15])
    np.testing.assert_array_equal(quantize(v, 256), v)


def test_quantize_range():
    v = np.arange(256, dtype=np.uint8)
    for levels in (2, 8, 16, 61):
        q = quantize(v, levels)
        assert q.min() == 0 and q.max() == levels - 1
        assert (np.diff(q) >= 0).all()


# ---- co-occurrence counts ---------------------------------------------------

def test_glcm_matches_bruteforce_whole_image():
    rng = Rng(61)
    for _ in range(6):
        img = _random_gray(rng, 20, 20)
        for distance in (1, 5):
            for levels in (8, 16):
                g = compute_glcm(img, None, distance, levels)
                ref = glcm_reference(img.samples,
                                     np.ones((20, 20), dtype=bool),
                                     distance, levels, DIRECTIONS_4)
                np.testing.assert_array_equal(g.counts, ref)


def test_glcm_matches_bruteforce_with_roi_mask():
    rng = Rng(62)
    for _ in range(4):
        img = _random_gray(rng, 24, 24)
        mask = threshold_segment(img, 110)
        if mask.foreground_count == 0:
            continue
        roi = extract_roi(mask)
        g = compute_glcm(img, roi, 2, 8)
        window = img.samples[roi.y0:roi.y1 + 1, roi.x0:roi.x1 + 1]
        ref = glcm_reference(window, roi.mask.foreground, 2, 8, DIRECTIONS_4)
        np.testing.assert_array_equal(g.counts, ref)


def test_glcm_counts_are_symmetric_and_normalized():
    rng = Rng(63)
    img = _random_gray(rng, 30, 30)
    g = compute_glcm(img)
    np.testing.assert_array_equal(g.counts, g.counts.T)
    assert g.p.sum() == pytest.approx(1.0, abs=1e-12)
    assert (g.p >= 0).all()


def test_glcm_small_region_raises():
    img = make_gray(np.full((3, 3), 200))
    with pytest.raises(NoValidPairs):
        compute_glcm(img, None, distance=5)


def test_glcm_isolated_mask_pixels_raise():
    arr = np.zeros((20, 20))
    arr[0, 0] = 255
    arr[10, 10] = 255  # pair offsets never hit both at distance 5
    img = make_gray(arr)
    roi = extract_roi(threshold_segment(img, 100))
    with pytest.raises(NoValidPairs):
        compute_glcm(img, roi, distance=5)


def test_glcm_parameter_validation():
    img = make_gray(np.zeros((8, 8)))
    with pytest.raises(ValueError):
        compute_glcm(img, None, distance=0)
    with pytest.raises(ValueError):
        compute_glcm(img, None, levels=1)


# ---- texture statistics -----------------------------------------------------

def test_uniform_glcm_features():
    levels = 16
    p = np.full((levels, levels), 1.0 / levels ** 2)
    f = textural_features(_glcm_from_p(p, levels))
    assert f.entropy == pytest.approx(2 * np.log2(levels), abs=1e-12)
    assert f.energy == pytest.approx(1.0 / levels ** 2, abs=1e-15)


def test_diagonal_glcm_features():
    levels = 8
    rng = Rng(65)
    diag = np.array([rng.uniform() + 0.05 for _ in range(levels)])
    p = np.diag(diag / diag.sum())
    f = textural_features(_glcm_from_p(p, levels))
    assert f.inertia == 0.0
    assert f.inverse_difference == 1.0
    assert f.correlation == pytest.approx(1.0, abs=1e-9)


def test_concentrated_glcm_degenerate_correlation():
    levels = 8
    p = np.zeros((levels, levels))
    p[3, 3] = 1.0
    f = textural_features(_glcm_from_p(p, levels))
    assert f.correlation == 1.0  # pinned zero-variance convention
    assert f.entropy == 0.0
    assert f.energy == 1.0


def test_correlation_against_double_loop():
    levels = 6
    rng = Rng(66)
    p = rng.uniform_array((levels, levels))
    p = p / p.sum()
    f = textural_features(_glcm_from_p(p, levels))

    mu_i = sum(i * p[i, j] for i in range(levels) for j in range(levels))
    mu_j = sum(j * p[i, j] for i in range(levels) for j in range(levels))
    sig_i = np.sqrt(sum((i - mu_i) ** 2 * p[i, j]
                        for i in range(levels) for j in range(levels)))
    sig_j = np.sqrt(sum((j - mu_j) ** 2 * p[i, j]
                        for i in range(levels) for j in range(levels)))
    ref = sum((i - mu_i) * (j - mu_j) * p[i, j]
              for i in range(levels) for j in range(levels)) / (sig_i * sig_j)
    assert f.correlation == pytest.approx(ref, abs=1e-12)

    ref_entropy = -sum(p[i, j] * np.log2(p[i, j])
                       for i in range(levels) for j in range(levels)
                       if p[i, j] > 0)
    assert f.entropy == pytest.approx(ref_entropy, abs=1e-12)
    ref_inertia = sum((i - j) ** 2 * p[i, j]
                      for i in range(levels) for j in range(levels))
    assert f.inertia == pytest.approx(ref_inertia, abs=1e-12)
    ref_id = sum(p[i, j] / (1 + abs(i - j))
                 for i in range(levels) for j in range(levels))
    assert f.inverse_difference == pytest.approx(ref_id, abs=1e-12)


def test_marginals_symmetric_matrix():
    rng = Rng(67)
    raw = rng.uniform_array((16, 16))
    sym = raw + raw.T
    m = marginals(_glcm_from_p(sym / sym.sum(), 16))
    assert m.mu_i == pytest.approx(m.mu_j, abs=1e-12)
    assert m.sigma_i == pytest.approx(m.sigma_j, abs=1e-12)


def test_random_glcm_invariant_ranges():
    rng = Rng(68)
    for _ in range(300):
        levels = (8, 16)[rng.randint(2)]
        raw = rng.uniform_array((levels, levels))
        sym = raw + raw.T
        f = textural_features(_glcm_from_p(sym / sym.sum(), levels))
        assert 0.0 < f.energy <= 1.0
        assert 0.0 < f.inverse_difference <= 1.0
        assert -1.0 - 1e-9 <= f.correlation <= 1.0 + 1e-9
        assert f.entropy <= 2 * np.log2(levels) + 1e-12
        assert f.inertia >= 0.0


def test_glcm_csv_dump(tmp_path):
    rng = Rng(69)
    img = _random_gray(rng, 16, 16)
    g = compute_glcm(img, None, 1, 8)
    path = tmp_path / "glcm.csv"
    glcm_to_csv(g, path)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 9
    values = np.array([[float(v) for v in row[1:]] for row in rows[1:]])
    np.testing.assert_array_equal(values, g.p)
