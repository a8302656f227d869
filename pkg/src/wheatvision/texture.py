"""Gray-level co-occurrence matrix and the five texture statistics.

Intensities are quantized to L bins with floor(v * L / 256). Pair counts are
accumulated symmetrically (each ordered pair and its reverse) over the chosen
offsets at the configured pixel distance, restricted to pixels where the ROI
mask is foreground, then normalized into probabilities P(i, j).

With P normalized and mu/sigma the marginal mean/std over row index i and
column index j:

  entropy            -sum P * log2(P)            over P > 0, in bits
  inertia            sum (i - j)^2 * P
  correlation        sum (i - mu_i)(j - mu_j) P / (sigma_i * sigma_j)
  inverse difference sum P / (1 + |i - j|)
  energy             sum P^2

A fully concentrated matrix has zero sigma; correlation is defined as 1.0
there (sigma_i * sigma_j below 1e-12).
"""

import csv
from dataclasses import dataclass

import numpy as np

from .errors import NoValidPairs
from .imaging import GrayImage

DEFAULT_DISTANCE = 5
DEFAULT_LEVELS = 16

# Offsets (dy, dx) for the four standard directions at unit distance:
# 0, 45, 90, 135 degrees with y growing downward.
DIRECTIONS_4 = ((0, 1), (-1, 1), (-1, 0), (-1, -1))

TEXTURE_FEATURE_NAMES = ("entropy", "inertia", "correlation",
                         "inverse_difference", "energy")
N_TEXTURE_FEATURES = 5

_SIGMA_FLOOR = 1e-12


@dataclass(frozen=True)
class GlcmMatrix:
    levels: int
    counts: np.ndarray      # (L, L) int64, symmetric
    p: np.ndarray           # (L, L) float64, sums to 1
    distance: int
    directions: tuple
    symmetric: bool = True


@dataclass(frozen=True)
class GlcmMarginals:
    mu_i: float
    mu_j: float
    sigma_i: float
    sigma_j: float


@dataclass(frozen=True)
class TexturalFeatures:
    entropy: float
    inertia: float
    correlation: float
    inverse_difference: float
    energy: float

    def to_array(self):
        return np.array([self.entropy, self.inertia, self.correlation,
                         self.inverse_difference, self.energy])


def quantize(samples, levels):
    """Map 8-bit intensities onto [0, levels) via floor(v * L / 256)."""
    return (samples.astype(np.int64) * levels) // 256


def compute_glcm(img: GrayImage, roi=None, distance=DEFAULT_DISTANCE,
                 levels=DEFAULT_LEVELS, directions=DIRECTIONS_4) -> GlcmMatrix:
    """Symmetric co-occurrence counts over the ROI (whole image when None).

    Raises NoValidPairs when no offset pair fits inside the masked region;
    callers are expected to retry on the whole image.
    """
    if distance < 1:
        raise ValueError("distance must be >= 1")
    if not 2 <= levels <= 256:
        raise ValueError("levels must be in [2, 256]")

    if roi is None:
        window = img.samples
        valid = np.ones(window.shape, dtype=bool)
    else:
        window = img.samples[roi.y0:roi.y1 + 1, roi.x0:roi.x1 + 1]
        valid = roi.mask.foreground

    q = quantize(window, levels)
    h, w = q.shape
    counts = np.zeros((levels, levels), dtype=np.int64)
    for dy, dx in directions:
        oy, ox = dy * distance, dx * distance
        ys = slice(max(0, -oy), min(h, h - oy))
        xs = slice(max(0, -ox), min(w, w - ox))
        ys2 = slice(max(0, oy), min(h, h + oy))
        xs2 = slice(max(0, ox), min(w, w + ox))
        a = q[ys, xs]
        b = q[ys2, xs2]
        ok = valid[ys, xs] & valid[ys2, xs2]
        if not ok.any():
            continue
        pairs = np.bincount(a[ok] * levels + b[ok], minlength=levels * levels)
        pairs = pairs.reshape(levels, levels)
        counts += pairs
        counts += pairs.T
    total = counts.sum()
    if total == 0:
        raise NoValidPairs(
            f"no co-occurring pixel pairs at distance {distance} in a "
            f"{w}x{h} region")
    return GlcmMatrix(levels=levels, counts=counts,
                      p=counts / float(total), distance=distance,
                      directions=tuple(directions))


def marginals(g: GlcmMatrix) -> GlcmMarginals:
    """Mean and standard deviation of the row and column marginals."""
    idx = np.arange(g.levels, dtype=np.float64)
    p_i = g.p.sum(axis=1)
    p_j = g.p.sum(axis=0)
    mu_i = float((idx * p_i).sum())
    mu_j = float((idx * p_j).sum())
    sigma_i = float(np.sqrt((((idx - mu_i) ** 2) * p_i).sum()))
    sigma_j = float(np.sqrt((((idx - mu_j) ** 2) * p_j).sum()))
    return GlcmMarginals(mu_i, mu_j, sigma_i, sigma_j)


def textural_features(g: GlcmMatrix) -> TexturalFeatures:
    p = g.p
    idx = np.arange(g.levels, dtype=np.float64)
    i = idx[:, None]
    j = idx[None, :]

    nz = p[p > 0]
    entropy = float(-(nz * np.log2(nz)).sum())
    inertia = float(((i - j) ** 2 * p).sum())
    m = marginals(g)
    denom = m.sigma_i * m.sigma_j
    if denom < _SIGMA_FLOOR:
        correlation = 1.0
    else:
        correlation = float((((i - m.mu_i) * (j - m.mu_j) * p).sum()) / denom)
    inverse_difference = float((p / (1.0 + np.abs(i - j))).sum())
    energy = float((p * p).sum())
    return TexturalFeatures(entropy, inertia, correlation,
                            inverse_difference, energy)


def glcm_to_csv(g: GlcmMatrix, path):
    """Dump normalized P(i, j) as a CSV table for debugging."""
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["i\\j"] + list(range(g.levels)))
        for i in range(g.levels):
            writer.writerow([i] + [repr(float(v)) for v in g.p[i]])
