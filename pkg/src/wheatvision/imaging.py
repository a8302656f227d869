"""Image loading, grayscale conversion and resizing.

The pipeline works on 8-bit grayscale rasters at a canonical 224x224
resolution. Conversions are pinned so that repeated runs are bit-identical:

  luminance  Y = round-half-up(0.299 R + 0.587 G + 0.114 B)  (BT.601, exact)
  resize     bilinear with half-pixel source centers, clamped to [0, 255]
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import CorruptImage, InvalidDimensions, UnsupportedFormat

CANONICAL_SIZE = 224

RGB = "RGB"
BGR = "BGR"
GRAY = "GRAY"


@dataclass(frozen=True)
class RasterImage:
    """Decoded 8-bit raster. samples is (h, w) for GRAY or (h, w, 3) otherwise."""

    width: int
    height: int
    channels: int
    channel_order: str
    samples: np.ndarray

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise InvalidDimensions(f"bad image size {self.width}x{self.height}")
        expected = (self.height, self.width) if self.channels == 1 else (self.height, self.width, 3)
        if self.samples.shape != expected:
            raise ValueError(f"sample shape {self.samples.shape} != {expected}")
        if self.samples.dtype != np.uint8:
            raise ValueError("samples must be uint8")


@dataclass(frozen=True)
class GrayImage:
    """Single-channel 8-bit raster; samples is (h, w) uint8."""

    width: int
    height: int
    samples: np.ndarray

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise InvalidDimensions(f"bad image size {self.width}x{self.height}")
        if self.samples.shape != (self.height, self.width):
            raise ValueError(f"sample shape {self.samples.shape} != {(self.height, self.width)}")
        if self.samples.dtype != np.uint8:
            raise ValueError("samples must be uint8")


def load_image(path) -> RasterImage:
    """Decode a PNG or JPEG file into a RasterImage.

    Color images come back in RGB order, single-channel ones as GRAY.
    16-bit grayscale sources are rescaled to 8 bits (v -> round(v / 257)).
    Raises FileNotFoundError, UnsupportedFormat or CorruptImage.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(str(path))
    try:
        with Image.open(path) as im:
            if im.format not in ("PNG", "JPEG"):
                raise UnsupportedFormat(f"{path}: format {im.format!r}, want PNG or JPEG")
            im.load()
            mode = im.mode
            if mode in ("I", "I;16", "I;16B", "I;16L"):
                arr = np.asarray(im, dtype=np.float64)
                arr = np.floor(arr / 257.0 + 0.5).clip(0, 255).astype(np.uint8)
                return RasterImage(arr.shape[1], arr.shape[0], 1, GRAY, arr)
            if mode in ("L", "1"):
                arr = np.asarray(im.convert("L"), dtype=np.uint8)
                return RasterImage(arr.shape[1], arr.shape[0], 1, GRAY, arr)
            arr = np.asarray(im.convert("RGB"), dtype=np.uint8)
            return RasterImage(arr.shape[1], arr.shape[0], 3, RGB, arr)
    except UnidentifiedImageError as e:
        raise CorruptImage(f"{path}: not a decodable image") from e
    except (OSError, SyntaxError, ValueError) as e:
        raise CorruptImage(f"{path}: {e}") from e


def to_grayscale(img: RasterImage) -> GrayImage:
    """BT.601 luminance with round-half-up; GRAY inputs pass through.

    Computed in exact integer arithmetic, (299R + 587G + 114B + 500) // 1000;
    a float dot product drifts below the .5 boundary on a few thousand of
    the 2^24 possible triples and would round them down.
    """
    if img.channels == 1:
        return GrayImage(img.width, img.height, img.samples.copy())
    s = img.samples.astype(np.int64)
    if img.channel_order == BGR:
        r, g, b = s[..., 2], s[..., 1], s[..., 0]
    else:
        r, g, b = s[..., 0], s[..., 1], s[..., 2]
    y = (299 * r + 587 * g + 114 * b + 500) // 1000
    return GrayImage(img.width, img.height, y.astype(np.uint8))


def resize_bilinear(img: GrayImage, out_w: int, out_h: int) -> GrayImage:
    """Bilinear resize with half-pixel centers.

    Source coordinate of destination pixel i is (i + 0.5) * in/out - 0.5,
    clamped to the image. Identity sizes reproduce the input exactly.
    """
    if out_w < 1 or out_h < 1:
        raise InvalidDimensions(f"target size {out_w}x{out_h}")
    src = img.samples.astype(np.float64)
    h, w = img.height, img.width

    sx = np.clip((np.arange(out_w) + 0.5) * (w / out_w) - 0.5, 0.0, w - 1.0)
    sy = np.clip((np.arange(out_h) + 0.5) * (h / out_h) - 0.5, 0.0, h - 1.0)
    x0 = np.floor(sx).astype(np.int64)
    y0 = np.floor(sy).astype(np.int64)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = sx - x0
    fy = (sy - y0)[:, None]

    # Separable lerp keeps constants and identity resizes exact.
    top = src[y0][:, x0] + fx * (src[y0][:, x1] - src[y0][:, x0])
    bot = src[y1][:, x0] + fx * (src[y1][:, x1] - src[y1][:, x0])
    out = top + fy * (bot - top)
    out = np.floor(out + 0.5).clip(0, 255).astype(np.uint8)
    return GrayImage(out_w, out_h, out)
