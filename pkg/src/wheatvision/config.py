"""Pipeline configuration: every tunable in one serializable record.

The full config is embedded verbatim in feature caches' sibling metadata and
in every model file, so inference can never run with extraction settings
that differ from training. Precedence when assembling: CLI flag > config
file > defaults below.
"""

import json
from dataclasses import asdict, dataclass, fields

from .errors import PipelineError


@dataclass
class PipelineConfig:
    # imaging
    resize_width: int = 224
    resize_height: int = 224
    # segmentation
    canny_low: float = 100.0
    canny_high: float = 100.0
    canny_sigma: float = 1.4
    seg_threshold: int = 100
    # texture
    glcm_distance: int = 5
    glcm_levels: int = 16
    glcm_whole_image: bool = False
    # tree / forest / boosting
    tree_max_depth: int = 12
    tree_min_samples_split: int = 2
    tree_min_impurity_decrease: float = 0.0
    forest_trees: int = 100
    gbm_rounds: int = 100
    gbm_learning_rate: float = 0.1
    gbm_max_depth: int = 3
    # voting / stacking
    voting_mode: str = "hard"
    stacking_folds: int = 5
    meta_step: float = 0.1
    meta_iterations: int = 2000
    meta_l2: float = 1e-4
    # evaluation
    seed: int = 42
    test_fraction: float = 0.2
    cv_folds: int = 5
    workers: int = 1

    def validate(self):
        checks = [
            (self.resize_width >= 1 and self.resize_height >= 1, "resize size must be >= 1"),
            (0 <= self.canny_low <= self.canny_high <= 1020, "need 0 <= canny_low <= canny_high <= 1020"),
            (self.canny_sigma > 0, "canny_sigma must be positive"),
            (0 <= self.seg_threshold <= 255, "seg_threshold outside [0, 255]"),
            (self.glcm_distance >= 1, "glcm_distance must be >= 1"),
            (2 <= self.glcm_levels <= 256, "glcm_levels outside [2, 256]"),
            (self.tree_max_depth >= 1, "tree_max_depth must be >= 1"),
            (self.tree_min_samples_split >= 2, "tree_min_samples_split must be >= 2"),
            (self.tree_min_impurity_decrease >= 0, "tree_min_impurity_decrease must be >= 0"),
            (self.forest_trees >= 1, "forest_trees must be >= 1"),
            (self.gbm_rounds >= 1, "gbm_rounds must be >= 1"),
            (0 <= self.gbm_learning_rate <= 1, "gbm_learning_rate outside [0, 1]"),
            (self.gbm_max_depth >= 1, "gbm_max_depth must be >= 1"),
            (self.voting_mode in ("hard", "soft"), "voting_mode must be hard or soft"),
            (self.stacking_folds >= 2, "stacking_folds must be >= 2"),
            (self.meta_step > 0, "meta_step must be positive"),
            (self.meta_iterations >= 1, "meta_iterations must be >= 1"),
            (self.meta_l2 >= 0, "meta_l2 must be >= 0"),
            (0 < self.test_fraction < 1, "test_fraction outside (0, 1)"),
            (self.cv_folds >= 2, "cv_folds must be >= 2"),
            (self.workers >= 1, "workers must be >= 1"),
        ]
        for ok, message in checks:
            if not ok:
                raise PipelineError(f"invalid config: {message}")
        return self

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise PipelineError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data).validate()

    @classmethod
    def load(cls, path):
        """Read a JSON config file."""
        try:
            with open(path) as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise PipelineError(f"{path}: not valid JSON ({e})") from e
        if not isinstance(data, dict):
            raise PipelineError(f"{path}: config must be a JSON object")
        return cls.from_dict(data)

    def save(self, path):
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")
