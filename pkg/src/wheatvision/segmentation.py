"""Edge detection, thresholding and region-of-interest extraction.

Canny here is the classic 5-stage chain: Gaussian smoothing (radius
ceil(3*sigma), reflect padding), 3x3 Sobel gradients, 4-bin non-maximum
suppression, double thresholding, and hysteresis that keeps weak pixels
8-connected to strong ones. Thresholds live on the raw L2 Sobel magnitude
scale (up to 1020 per axis for 8-bit input); nothing is normalized, so the
default (100, 100) pair is meaningful in absolute intensity terms.
"""

from collections import deque
from dataclasses import dataclass

import numpy as np
from PIL import Image
from scipy import ndimage

from .errors import EmptyMask, InvalidThresholds
from .imaging import GrayImage

# 8-connectivity for foreground objects, 4-connectivity for background when
# counting holes (the standard dual pairing).
STRUCT_8 = np.ones((3, 3), dtype=bool)
STRUCT_4 = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


@dataclass(frozen=True)
class EdgeMap:
    width: int
    height: int
    edges: np.ndarray  # (h, w) bool

    @property
    def edge_count(self):
        return int(self.edges.sum())


@dataclass(frozen=True)
class BinaryMask:
    width: int
    height: int
    foreground: np.ndarray  # (h, w) bool

    def __post_init__(self):
        if self.foreground.shape != (self.height, self.width):
            raise ValueError("mask shape mismatch")

    @property
    def foreground_count(self):
        return int(self.foreground.sum())


@dataclass(frozen=True)
class Roi:
    """Bounding box (inclusive) of one component plus its mask within the box."""

    x0: int
    y0: int
    x1: int
    y1: int
    mask: BinaryMask

    def __post_init__(self):
        if self.x1 < self.x0 or self.y1 < self.y0:
            raise ValueError("degenerate box")
        if self.mask.foreground_count < 1:
            raise ValueError("ROI without foreground")

    @property
    def width(self):
        return self.x1 - self.x0 + 1

    @property
    def height(self):
        return self.y1 - self.y0 + 1


def _gaussian_kernel(sigma):
    radius = int(np.ceil(3.0 * sigma))
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum(), radius


def _convolve_separable(img, kernel, radius):
    # numpy 'reflect': mirror without repeating the edge sample.
    padded = np.pad(img, radius, mode="reflect")
    taps = len(kernel)
    h, w = img.shape
    out = np.zeros((h, w + 2 * radius), dtype=np.float64)
    for t in range(taps):
        out += kernel[t] * padded[t:t + h, :]
    out2 = np.zeros((h, w), dtype=np.float64)
    for t in range(taps):
        out2 += kernel[t] * out[:, t:t + w]
    return out2


def _sobel(img):
    p = np.pad(img, 1, mode="reflect")
    # 3x3 Sobel; gx responds to left->right increase, gy to top->bottom.
    gx = (p[0:-2, 2:] + 2.0 * p[1:-1, 2:] + p[2:, 2:]
          - p[0:-2, 0:-2] - 2.0 * p[1:-1, 0:-2] - p[2:, 0:-2])
    gy = (p[2:, 0:-2] + 2.0 * p[2:, 1:-1] + p[2:, 2:]
          - p[0:-2, 0:-2] - 2.0 * p[0:-2, 1:-1] - p[0:-2, 2:])
    return gx, gy


def _shift(arr, dy, dx, fill=0.0):
    out = np.full_like(arr, fill)
    h, w = arr.shape
    ys = slice(max(dy, 0), h + min(dy, 0))
    xs = slice(max(dx, 0), w + min(dx, 0))
    ysrc = slice(max(-dy, 0), h + min(-dy, 0))
    xsrc = slice(max(-dx, 0), w + min(-dx, 0))
    out[ys, xs] = arr[ysrc, xsrc]
    return out


def _non_max_suppress(mag, gx, gy):
    """Keep pixels >= both neighbors along the quantized gradient direction.

    Ties are retained, so a perfectly symmetric step keeps both straddling
    columns. Neighbors outside the image count as magnitude 0.
    """
    angle = np.degrees(np.arctan2(gy, gx)) % 180.0
    bin0 = (angle < 22.5) | (angle >= 157.5)          # gradient ~ horizontal
    bin1 = (angle >= 22.5) & (angle < 67.5)           # ~ 45 deg
    bin2 = (angle >= 67.5) & (angle < 112.5)          # ~ vertical
    bin3 = (angle >= 112.5) & (angle < 157.5)         # ~ 135 deg

    keep = np.zeros(mag.shape, dtype=bool)
    for sel, (dy, dx) in ((bin0, (0, 1)), (bin1, (1, 1)), (bin2, (1, 0)), (bin3, (1, -1))):
        n1 = _shift(mag, dy, dx)
        n2 = _shift(mag, -dy, -dx)
        keep |= sel & (mag >= n1) & (mag >= n2)
    return keep & (mag > 0)


def _hysteresis(strong, weak):
    """BFS from strong pixels through 8-connected weak pixels."""
    if not weak.any():
        return strong.copy()
    h, w = strong.shape
    edges = strong.copy()
    queue = deque(zip(*np.nonzero(strong)))
    while queue:
        y, x = queue.popleft()
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                ny, nx = y + dy, x + dx
                if 0 <= ny < h and 0 <= nx < w and weak[ny, nx] and not edges[ny, nx]:
                    edges[ny, nx] = True
                    queue.append((ny, nx))
    return edges


def canny(img: GrayImage, low=100.0, high=100.0, sigma=1.4) -> EdgeMap:
    """Canny edge map with thresholds on the raw Sobel L2 magnitude."""
    if not (0 <= low <= high <= 1020):
        raise InvalidThresholds(f"need 0 <= low <= high <= 1020, got ({low}, {high})")
    if sigma <= 0:
        raise InvalidThresholds(f"sigma must be positive, got {sigma}")
    kernel, radius = _gaussian_kernel(sigma)
    smoothed = _convolve_separable(img.samples.astype(np.float64), kernel, radius)
    gx, gy = _sobel(smoothed)
    mag = np.hypot(gx, gy)
    nms = _non_max_suppress(mag, gx, gy)
    strong = nms & (mag >= high)
    weak = nms & (mag >= low) & (mag < high)
    edges = _hysteresis(strong, weak)
    return EdgeMap(img.width, img.height, edges)


def threshold_segment(img: GrayImage, t=100) -> BinaryMask:
    """Foreground where intensity >= t."""
    if not 0 <= t <= 255:
        raise InvalidThresholds(f"threshold {t} outside [0, 255]")
    return BinaryMask(img.width, img.height, img.samples >= t)


def label_components(foreground):
    """8-connected labeling; returns (labels, count) with scipy doing the scan."""
    labels, count = ndimage.label(foreground, structure=STRUCT_8)
    return labels, count


def extract_roi(mask: BinaryMask) -> Roi:
    """Tight box of the largest 8-connected component, mask restricted to it.

    Equal-sized components tie-break toward the one whose first pixel comes
    earliest in row-major order.
    """
    labels, count = label_components(mask.foreground)
    if count == 0:
        raise EmptyMask("mask has no foreground pixel")
    flat = labels.ravel()
    sizes = np.bincount(flat)[1:]
    candidates = np.nonzero(sizes == sizes.max())[0] + 1
    if len(candidates) == 1:
        best = int(candidates[0])
    else:
        # earliest first pixel in row-major order wins among equal sizes
        best = int(min(candidates, key=lambda l: int(np.argmax(flat == l))))
    component = labels == best
    ys, xs = np.nonzero(component)
    y0, y1 = int(ys.min()), int(ys.max())
    x0, x1 = int(xs.min()), int(xs.max())
    sub = component[y0:y1 + 1, x0:x1 + 1]
    return Roi(x0, y0, x1, y1, BinaryMask(x1 - x0 + 1, y1 - y0 + 1, sub))


def whole_image_roi(width, height) -> Roi:
    """All-foreground fallback ROI used when segmentation finds nothing."""
    full = BinaryMask(width, height, np.ones((height, width), dtype=bool))
    return Roi(0, 0, width - 1, height - 1, full)


def mask_to_png(mask: BinaryMask, path):
    """Write the mask as an 8-bit PNG (foreground 255, background 0)."""
    arr = np.where(mask.foreground, 255, 0).astype(np.uint8)
    Image.fromarray(arr, mode="L").save(path, format="PNG")
