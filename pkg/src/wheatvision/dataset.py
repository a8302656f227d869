"""Labeled datasets: directory ingestion, CSV caching, splits and scaling.

A dataset directory has one subdirectory per class; lexicographic subdirectory
order defines the class ids. The feature cache is a CSV with header

    path,label,b00,...,b22,t0,...,t4

where path is relative to the ingested root and floats are written with
repr(), so a reloaded cache is bit-identical to fresh extraction.

All randomized operations take an explicit seed and draw from the project
generator (see rng.py); there is no hidden global RNG.
"""

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ClassTooSmall, EmptyDataset, PipelineError
from .features import FEATURE_COLUMNS, N_FEATURES, extract_from_path
from .rng import Rng
from .segmentation import mask_to_png

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")


@dataclass(frozen=True)
class LabeledSample:
    features: np.ndarray
    label: int
    source: str


@dataclass
class Dataset:
    samples: list
    class_names: list
    feature_means: np.ndarray = None
    feature_stds: np.ndarray = None
    skipped: int = 0

    def __len__(self):
        return len(self.samples)

    @property
    def n_classes(self):
        return len(self.class_names)

    def matrix(self):
        """(n, 28) float64 feature matrix and (n,) int64 label vector."""
        X = np.stack([s.features for s in self.samples]).astype(np.float64)
        y = np.array([s.label for s in self.samples], dtype=np.int64)
        return X, y

    def labels(self):
        return np.array([s.label for s in self.samples], dtype=np.int64)

    def class_counts(self):
        return np.bincount(self.labels(), minlength=self.n_classes)


@dataclass(frozen=True)
class SplitPlan:
    train: np.ndarray
    test: np.ndarray
    seed: int


@dataclass(frozen=True)
class FoldPlan:
    folds: tuple  # k index arrays
    seed: int

    @property
    def k(self):
        return len(self.folds)

    def train_indices(self, fold):
        others = [f for i, f in enumerate(self.folds) if i != fold]
        return np.sort(np.concatenate(others))


def list_class_dirs(root):
    root = Path(root)
    if not root.is_dir():
        raise PipelineError(f"{root}: not a directory")
    return sorted(d for d in root.iterdir() if d.is_dir())


def list_images(class_dir):
    return sorted(p for p in class_dir.iterdir()
                  if p.suffix.lower() in IMAGE_SUFFIXES and p.is_file())


def ingest_directory(root, config, on_warning=None, mask_dir=None) -> Dataset:
    """Extract features for every readable image under root/<class>/.

    Unreadable files are skipped and counted; `on_warning` (if given) gets a
    message per skipped file. Needs at least 2 classes and 1 usable image.
    With mask_dir set, each image's segmentation mask is saved there as a
    0/255 PNG mirroring the class layout.
    """
    root = Path(root)
    class_dirs = list_class_dirs(root)
    if len(class_dirs) < 2:
        raise EmptyDataset(f"{root}: need at least 2 class subdirectories, "
                           f"found {len(class_dirs)}")

    jobs = []  # (path, label) in deterministic path order
    for label, class_dir in enumerate(class_dirs):
        for path in list_images(class_dir):
            jobs.append((path, label))

    def run(job):
        path, label = job
        try:
            result = extract_from_path(path, config)
        except (PipelineError, FileNotFoundError) as e:
            return (path, label, None, str(e))
        if mask_dir is not None:
            out = Path(mask_dir) / path.relative_to(root).with_suffix(".png")
            out.parent.mkdir(parents=True, exist_ok=True)
            mask_to_png(result.mask, out)
        return (path, label, result.features, None)

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(run, jobs))
    else:
        outcomes = [run(job) for job in jobs]

    samples = []
    skipped = 0
    for path, label, feats, err in outcomes:
        if feats is None:
            skipped += 1
            if on_warning:
                on_warning(f"skipping {path}: {err}")
            continue
        samples.append(LabeledSample(feats, label, str(path.relative_to(root))))
    if not samples:
        raise EmptyDataset(f"{root}: no readable images")
    return Dataset(samples=samples, class_names=[d.name for d in class_dirs],
                   skipped=skipped)


def write_csv(ds: Dataset, path):
    """Write the feature cache; floats use repr() so they round-trip exactly."""
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["path", "label"] + list(FEATURE_COLUMNS))
        for s in ds.samples:
            writer.writerow([s.source, s.label] + [repr(float(v)) for v in s.features])


def read_csv(path, class_names=None) -> Dataset:
    """Load a feature cache written by write_csv.

    Class names are recovered from the parent directory in each path column
    when available, else named class<id>.
    """
    samples = []
    name_by_label = {}
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != ["path", "label"] + list(FEATURE_COLUMNS):
            raise PipelineError(f"{path}: unexpected feature CSV header")
        for row in reader:
            if not row:
                continue
            source, label = row[0], int(row[1])
            values = np.array([float(v) for v in row[2:]], dtype=np.float64)
            if len(values) != N_FEATURES:
                raise PipelineError(f"{path}: row with {len(values)} features")
            samples.append(LabeledSample(values, label, source))
            parent = Path(source).parent.name
            if parent:
                name_by_label.setdefault(label, parent)
    if not samples:
        raise EmptyDataset(f"{path}: no rows")
    n_classes = max(s.label for s in samples) + 1
    if class_names is None:
        class_names = [name_by_label.get(i, f"class{i}") for i in range(n_classes)]
    return Dataset(samples=samples, class_names=list(class_names))


def _per_class_indices(labels, n_classes):
    return [np.nonzero(labels == c)[0] for c in range(n_classes)]


def split(ds: Dataset, test_fraction, seed) -> SplitPlan:
    """Stratified train/test split, deterministic for (dataset order, seed).

    Per class, round(n_c * fraction) samples go to test, clamped so both
    sides keep at least one sample; proportions hold within one sample.
    """
    if not 0 < test_fraction < 1:
        raise PipelineError(f"test_fraction {test_fraction} outside (0, 1)")
    labels = ds.labels()
    rng = Rng(seed)
    train, test = [], []
    for c, idx in enumerate(_per_class_indices(labels, ds.n_classes)):
        if len(idx) == 0:
            continue
        if len(idx) < 2:
            raise ClassTooSmall(
                f"class {ds.class_names[c]!r} has {len(idx)} sample(s), need >= 2")
        order = list(idx)
        rng.split(c).shuffle(order)
        n_test = int(np.floor(len(idx) * test_fraction + 0.5))
        n_test = min(max(n_test, 1), len(idx) - 1)
        test.extend(order[:n_test])
        train.extend(order[n_test:])
    return SplitPlan(train=np.sort(np.array(train, dtype=np.int64)),
                     test=np.sort(np.array(test, dtype=np.int64)),
                     seed=seed)


def stratified_fold_indices(labels, n_classes, k, seed, class_names=None):
    """Stratified k folds over an integer label array; per-class fold sizes
    differ by at most one. Shared by cross-validation and stacking."""
    if k < 2:
        raise PipelineError(f"k must be >= 2, got {k}")
    folds = [[] for _ in range(k)]
    rng = Rng(seed)
    for c, idx in enumerate(_per_class_indices(labels, n_classes)):
        if len(idx) == 0:
            continue
        if len(idx) < k:
            name = class_names[c] if class_names else f"class {c}"
            raise ClassTooSmall(
                f"{name!r} has {len(idx)} sample(s), need >= {k}")
        order = list(idx)
        rng.split(c).shuffle(order)
        for i, sample_idx in enumerate(order):
            folds[i % k].append(sample_idx)
    return tuple(np.sort(np.array(f, dtype=np.int64)) for f in folds)


def kfold(ds: Dataset, k, seed) -> FoldPlan:
    labels = ds.labels()
    folds = stratified_fold_indices(labels, ds.n_classes, k, seed,
                                    class_names=ds.class_names)
    return FoldPlan(folds=folds, seed=seed)


def train_statistics(X, train_idx):
    """Mean and std of each dimension over the training rows only.

    Zero-variance dimensions get (mean 0, std 1) so the transform leaves
    them untouched.
    """
    sub = X[train_idx]
    means = sub.mean(axis=0)
    stds = sub.std(axis=0)  # population std
    constant = stds == 0.0
    means = np.where(constant, 0.0, means)
    stds = np.where(constant, 1.0, stds)
    return means, stds


def standardize(ds: Dataset, plan: SplitPlan) -> Dataset:
    """Z-score every sample with statistics fitted on the train split only."""
    X, _ = ds.matrix()
    means, stds = train_statistics(X, plan.train)
    Z = (X - means) / stds
    samples = [LabeledSample(Z[i], s.label, s.source)
               for i, s in enumerate(ds.samples)]
    return Dataset(samples=samples, class_names=list(ds.class_names),
                   feature_means=means, feature_stds=stds, skipped=ds.skipped)


def apply_standardization(values, means, stds):
    """Transform a raw vector with stored training statistics."""
    return (np.asarray(values, dtype=np.float64) - means) / stds
