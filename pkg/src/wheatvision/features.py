"""Feature fusion and the single-image extraction pipeline.

A fused vector has 28 dimensions: the 23 binary shape numbers (b00..b22)
followed by the 5 texture numbers (t0..t4 = entropy, inertia, correlation,
inverse difference, energy). The columns are stable; CSV caches and model
files both rely on this exact layout.
"""

from dataclasses import dataclass

import numpy as np

from . import binary_features as bf
from . import texture as tx
from .errors import EmptyMask, NoValidPairs, NonFiniteFeature
from .imaging import GrayImage, load_image, resize_bilinear, to_grayscale
from .segmentation import canny, extract_roi, threshold_segment, whole_image_roi

N_FEATURES = bf.N_BINARY_FEATURES + tx.N_TEXTURE_FEATURES

FEATURE_COLUMNS = tuple(f"b{i:02d}" for i in range(bf.N_BINARY_FEATURES)) + \
    tuple(f"t{i}" for i in range(tx.N_TEXTURE_FEATURES))

FEATURE_DESCRIPTIONS = dict(
    zip(FEATURE_COLUMNS, bf.BINARY_FEATURE_NAMES + tx.TEXTURE_FEATURE_NAMES))


def fuse(binary: bf.BinaryFeatures, textural: tx.TexturalFeatures) -> np.ndarray:
    """Concatenate the two blocks; rejects NaN/Inf with the offending index."""
    values = np.concatenate([binary.to_array(), textural.to_array()])
    bad = np.nonzero(~np.isfinite(values))[0]
    if len(bad):
        dim = int(bad[0])
        raise NonFiniteFeature(dim, float(values[dim]))
    return values


@dataclass
class ExtractionResult:
    """Fused vector plus what the segmentation stage actually did."""

    features: np.ndarray
    edge_count: int
    foreground_count: int
    used_whole_image_roi: bool
    used_whole_image_glcm: bool
    roi_box: tuple
    mask: object  # BinaryMask, kept for optional debug export
    glcm: object  # GlcmMatrix, ditto


def extract_from_gray(img: GrayImage, config) -> ExtractionResult:
    """Segment one grayscale image and compute its fused feature vector.

    An empty segmentation mask falls back to a whole-image ROI; a region too
    small for the co-occurrence offset falls back to a whole-image GLCM.
    Both fallbacks are reported in the result, never silent.
    """
    img = resize_bilinear(img, config.resize_width, config.resize_height)
    edges = canny(img, config.canny_low, config.canny_high, config.canny_sigma)
    mask = threshold_segment(img, config.seg_threshold)

    whole_roi = False
    try:
        roi = extract_roi(mask)
    except EmptyMask:
        roi = whole_image_roi(img.width, img.height)
        whole_roi = True

    obj = bf.BinaryObject(
        xs=np.nonzero(roi.mask.foreground)[1] + roi.x0,
        ys=np.nonzero(roi.mask.foreground)[0] + roi.y0,
        x0=roi.x0, y0=roi.y0, x1=roi.x1, y1=roi.y1,
    )
    binary = bf.shape_descriptors(obj, mask)

    whole_glcm = config.glcm_whole_image
    if whole_glcm:
        glcm = tx.compute_glcm(img, None, config.glcm_distance, config.glcm_levels)
    else:
        try:
            glcm = tx.compute_glcm(img, roi, config.glcm_distance, config.glcm_levels)
        except NoValidPairs:
            glcm = tx.compute_glcm(img, None, config.glcm_distance, config.glcm_levels)
            whole_glcm = True
    textural = tx.textural_features(glcm)

    return ExtractionResult(
        features=fuse(binary, textural),
        edge_count=edges.edge_count,
        foreground_count=mask.foreground_count,
        used_whole_image_roi=whole_roi,
        used_whole_image_glcm=whole_glcm,
        roi_box=(roi.x0, roi.y0, roi.x1, roi.y1),
        mask=mask,
        glcm=glcm,
    )


def extract_from_path(path, config) -> ExtractionResult:
    """load -> grayscale -> extract, for one image file."""
    raster = load_image(path)
    return extract_from_gray(to_grayscale(raster), config)
