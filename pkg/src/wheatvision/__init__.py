"""Leaf-image disease classification with classical vision features.

Pipeline: load -> grayscale -> 224x224 resize -> Canny edges + threshold
segmentation -> largest-component ROI -> 23 binary shape numbers + 5 GLCM
texture numbers -> 28-dim fused vector -> tree / forest / boosting bases
combined by voting or stacking.
"""

from .config import PipelineConfig
from .errors import PipelineError
from .features import (FEATURE_COLUMNS, N_FEATURES, ExtractionResult,
                       extract_from_gray, extract_from_path, fuse)

__version__ = "0.1.0"

__all__ = ["PipelineConfig", "PipelineError", "FEATURE_COLUMNS",
           "N_FEATURES", "ExtractionResult", "extract_from_gray",
           "extract_from_path", "fuse", "__version__"]
