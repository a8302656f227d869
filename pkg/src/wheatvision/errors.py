"""Exception types raised across the pipeline.

Every error the library raises deliberately derives from PipelineError so the
CLI can map them to exit code 1; anything else escaping is a bug.
"""


class PipelineError(Exception):
    """Base class for all deliberate pipeline failures."""


# --- imaging ---

class UnsupportedFormat(PipelineError):
    """File is not an 8/16-bit PNG or JPEG."""


class CorruptImage(PipelineError):
    """File exists but cannot be decoded."""


class InvalidDimensions(PipelineError):
    """A zero or negative target size was requested."""


# --- segmentation ---

class InvalidThresholds(PipelineError):
    """Canny thresholds out of range or low > high."""


class EmptyMask(PipelineError):
    """No foreground pixel; callers fall back to the whole image."""


# --- texture ---

class NoValidPairs(PipelineError):
    """Region too small for the requested co-occurrence offset."""


# --- fusion / dataset ---

class NonFiniteFeature(PipelineError):
    """A fused feature dimension is NaN or infinite."""

    def __init__(self, dim, value):
        self.dim = dim
        self.value = value
        super().__init__(f"non-finite feature at dimension {dim}: {value!r}")


class EmptyDataset(PipelineError):
    """Directory ingestion produced no usable samples."""


class ClassTooSmall(PipelineError):
    """A class has too few samples for the requested split or fold count."""


# --- learners ---

class EmptyTrainingSet(PipelineError):
    """Fit called with zero samples."""


class DimensionMismatch(PipelineError):
    """Input vector length differs from the training dimensionality."""


class ClassSetMismatch(PipelineError):
    """Ensemble base models disagree on the number of classes."""


class ModelFormatError(PipelineError):
    """Model file is corrupt or has an unknown schema version."""


# --- metrics ---

class LengthMismatch(PipelineError):
    """y_true and y_pred have different lengths."""


class LabelOutOfRange(PipelineError):
    """A label is outside [0, n_classes)."""
