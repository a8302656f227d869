"""Shape descriptors of segmented binary objects.

The 23-number binary block, in feature-vector order:

  b00..b07  row occupancy of the object resampled to an 8x8 grid
  b08..b15  column occupancy of the same grid
  b16       area fraction, object pixels / image pixels
  b17       aspect ratio, bounding-box height / width
  b18, b19  centroid (x, y) normalized by image width / height
  b20       Euler number, components minus holes (1 - holes for one object)
  b21       thinness 4*pi*A/P^2, P = object pixels 4-adjacent to background
  b22       axis of least second moments, 0.5*atan2(2*mu11, mu20 - mu02)

Pixel coordinates are (x = column, y = row). Objects are 8-connected;
holes are 4-connected background regions that do not reach the box border.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .segmentation import STRUCT_4, BinaryMask, label_components

N_BINARY_FEATURES = 23
PROJECTION_GRID = 8

BINARY_FEATURE_NAMES = (
    tuple(f"proj_row_{i}" for i in range(8))
    + tuple(f"proj_col_{i}" for i in range(8))
    + ("area_fraction", "aspect_ratio", "centroid_x", "centroid_y",
       "euler", "thinness", "orientation")
)


@dataclass(frozen=True)
class BinaryObject:
    """One 8-connected component: pixel coordinates plus its tight box."""

    xs: np.ndarray         # column of each pixel
    ys: np.ndarray         # row of each pixel
    x0: int
    y0: int
    x1: int
    y1: int

    @property
    def n_pixels(self):
        return len(self.xs)

    @property
    def width(self):
        return self.x1 - self.x0 + 1

    @property
    def height(self):
        return self.y1 - self.y0 + 1

    def local_mask(self):
        """Boolean (height, width) raster of the object inside its box."""
        m = np.zeros((self.height, self.width), dtype=bool)
        m[self.ys - self.y0, self.xs - self.x0] = True
        return m


@dataclass(frozen=True)
class BinaryFeatures:
    row_projections: np.ndarray
    col_projections: np.ndarray
    area_fraction: float
    aspect_ratio: float
    centroid_x: float
    centroid_y: float
    euler: int
    thinness: float
    orientation: float

    def to_array(self):
        return np.concatenate([
            self.row_projections,
            self.col_projections,
            [self.area_fraction, self.aspect_ratio, self.centroid_x,
             self.centroid_y, float(self.euler), self.thinness, self.orientation],
        ])


def connected_components(mask: BinaryMask):
    """All 8-connected components, ordered by their first row-major pixel."""
    labels, count = label_components(mask.foreground)
    objects = []
    for obj_slice, label in zip(ndimage.find_objects(labels), range(1, count + 1)):
        ys, xs = np.nonzero(labels[obj_slice] == label)
        y_off, x_off = obj_slice[0].start, obj_slice[1].start
        ys = ys + y_off
        xs = xs + x_off
        objects.append(BinaryObject(
            xs=xs, ys=ys,
            x0=int(xs.min()), y0=int(ys.min()),
            x1=int(xs.max()), y1=int(ys.max()),
        ))
    objects.sort(key=lambda o: (int(o.ys[0]), int(o.xs[0])))
    return objects


def aspect_ratio(obj: BinaryObject) -> float:
    """Bounding-box height over width; 1.0 for squares."""
    return obj.height / obj.width


def centroid(obj: BinaryObject):
    """Mean pixel coordinate (x_c, y_c) of the object."""
    return float(obj.xs.mean()), float(obj.ys.mean())


def euler_number(mask: BinaryMask) -> int:
    """Components minus holes over the whole mask."""
    _, n_components = label_components(mask.foreground)
    return n_components - _count_holes(mask.foreground)


def _count_holes(foreground):
    """4-connected background regions not touching the border.

    The one-pixel pad makes every border-reachable background cell part of a
    single 4-connected region, so that region is the only non-hole.
    """
    h, w = foreground.shape
    inverse = np.ones((h + 2, w + 2), dtype=bool)
    inverse[1:-1, 1:-1] = ~foreground
    _, n_bg = ndimage.label(inverse, structure=STRUCT_4)
    return n_bg - 1


def _occupancy_grid(local_mask, grid=PROJECTION_GRID):
    """Nearest-neighbor resample of the object box to grid x grid cells."""
    h, w = local_mask.shape
    ys = np.minimum((np.floor((np.arange(grid) + 0.5) * h / grid)).astype(int), h - 1)
    xs = np.minimum((np.floor((np.arange(grid) + 0.5) * w / grid)).astype(int), w - 1)
    return local_mask[np.ix_(ys, xs)]


def _perimeter_pixels(local_mask):
    """Object pixels with at least one 4-neighbor outside the object."""
    padded = np.pad(local_mask, 1, mode="constant", constant_values=False)
    interior = (padded[:-2, 1:-1] & padded[2:, 1:-1]
                & padded[1:-1, :-2] & padded[1:-1, 2:])
    return int((local_mask & ~interior).sum())


def _orientation(xs, ys):
    xc, yc = xs.mean(), ys.mean()
    dx, dy = xs - xc, ys - yc
    mu20 = float((dx * dx).sum())
    mu02 = float((dy * dy).sum())
    mu11 = float((dx * dy).sum())
    return 0.5 * np.arctan2(2.0 * mu11, mu20 - mu02)


def shape_descriptors(obj: BinaryObject, mask: BinaryMask) -> BinaryFeatures:
    """All 23 binary features of one object within its image.

    The single-pixel case is a documented convention, not an error:
    orientation 0 and thinness computed with P = 4.
    """
    local = obj.local_mask()
    grid = _occupancy_grid(local).astype(np.float64)
    n = obj.n_pixels

    if n == 1:
        perimeter = 4
    else:
        perimeter = _perimeter_pixels(local)
    thinness = 4.0 * np.pi * n / (perimeter * perimeter)

    xc, yc = centroid(obj)
    holes = _count_holes(local)
    return BinaryFeatures(
        row_projections=grid.mean(axis=1),
        col_projections=grid.mean(axis=0),
        area_fraction=n / (mask.width * mask.height),
        aspect_ratio=aspect_ratio(obj),
        centroid_x=xc / mask.width,
        centroid_y=yc / mask.height,
        euler=1 - holes,
        thinness=thinness,
        orientation=float(_orientation(obj.xs.astype(np.float64), obj.ys.astype(np.float64))),
    )
