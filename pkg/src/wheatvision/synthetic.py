"""Synthetic 4-class grayscale fixture for benchmarks and tests.

Four visually distinct 224x224 patterns, each perturbed by mild uniform
noise: salt-and-pepper bright blobs on a dark field, an offset
checkerboard, a near-constant bright "healthy" frame, and horizontal
stripes. Class ids follow sorted directory names:
0=blobs, 1=checker, 2=healthy, 3=stripes.
"""

from pathlib import Path

import numpy as np
from PIL import Image

from .rng import Rng

CLASS_NAMES = ("blobs", "checker", "healthy", "stripes")
_NOISE_SPAN = 17  # uniform integer noise in [-8, 8]


def _noise(rng, size):
    return np.floor(rng.uniform_array((size, size)) * _NOISE_SPAN) - 8.0


def _healthy(rng, size):
    return np.full((size, size), 200.0)


def _stripes(rng, size):
    phase = rng.randint(16)
    rows = ((np.arange(size) + phase) // 8) % 2
    values = np.where(rows == 0, 180.0, 60.0)
    return np.tile(values[:, None], (1, size))


def _checker(rng, size):
    oy, ox = rng.randint(28), rng.randint(28)
    bi = (np.arange(size) + oy) // 28
    bj = (np.arange(size) + ox) // 28
    parity = (bi[:, None] + bj[None, :]) % 2
    return np.where(parity == 0, 190.0, 40.0)


def _blobs(rng, size):
    img = np.full((size, size), 30.0)
    yy, xx = np.mgrid[0:size, 0:size]
    for _ in range(4 + rng.randint(4)):
        cy, cx = rng.randint(size), rng.randint(size)
        r = 8 + rng.randint(12)
        img[(yy - cy) ** 2 + (xx - cx) ** 2 <= r * r] = 220.0
    return img


_BUILDERS = {"blobs": _blobs, "checker": _checker,
             "healthy": _healthy, "stripes": _stripes}


def render_image(class_name, index, seed, size=224):
    """One deterministic uint8 image; (class, index) selects the substream."""
    rng = Rng(seed).split(class_name, index)
    img = _BUILDERS[class_name](rng, size) + _noise(rng, size)
    return np.clip(img, 0.0, 255.0).astype(np.uint8)


def generate_dataset(root, n_per_class=100, seed=7, size=224):
    """Write n_per_class PNGs per class under root/<class>/; returns root."""
    root = Path(root)
    for name in CLASS_NAMES:
        class_dir = root / name
        class_dir.mkdir(parents=True, exist_ok=True)
        for i in range(n_per_class):
            arr = render_image(name, i, seed, size)
            Image.fromarray(arr, mode="L").save(class_dir / f"{name}_{i:03d}.png")
    return root
