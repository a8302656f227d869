"""Confusion matrices, precision/recall/F1 reports, and cross-validation."""

import csv
from dataclasses import dataclass, field

import numpy as np

from .dataset import train_statistics
from .errors import LabelOutOfRange, LengthMismatch, PipelineError
from . import learners


@dataclass(frozen=True)
class ConfusionMatrix:
    """Integer counts; rows are true classes, columns predictions."""
    counts: np.ndarray

    @property
    def n_classes(self):
        return self.counts.shape[0]

    @property
    def total(self):
        return int(self.counts.sum())

    @property
    def trace(self):
        return int(np.trace(self.counts))

    def row_sums(self):
        return self.counts.sum(axis=1)

    def col_sums(self):
        return self.counts.sum(axis=0)

    def to_csv(self, path, class_names=None):
        names = class_names or [f"class{c}" for c in range(self.n_classes)]
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["true\\pred"] + list(names))
            for c, row in enumerate(self.counts):
                writer.writerow([names[c]] + [int(v) for v in row])


def confusion(y_true, y_pred, n_classes) -> ConfusionMatrix:
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if len(y_true) != len(y_pred):
        raise LengthMismatch(
            f"{len(y_true)} true labels vs {len(y_pred)} predictions")
    if len(y_true) == 0:
        raise LengthMismatch("no samples to score")
    for arr, what in ((y_true, "true"), (y_pred, "predicted")):
        bad = (arr < 0) | (arr >= n_classes)
        if bad.any():
            raise LabelOutOfRange(
                f"{what} label {arr[bad][0]} outside [0, {n_classes})")
    counts = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(counts, (y_true, y_pred), 1)
    return ConfusionMatrix(counts)


@dataclass
class MetricsReport:
    accuracy: float
    precision: tuple
    recall: tuple
    f1: tuple
    support: tuple
    macro_precision: float
    macro_recall: float
    macro_f1: float
    weighted_precision: float
    weighted_recall: float
    weighted_f1: float
    micro_precision: float
    micro_recall: float
    micro_f1: float
    class_names: tuple = field(default=None)

    def to_dict(self):
        doc = {"accuracy": self.accuracy,
               "per_class": [], "macro": {}, "weighted": {}, "micro": {}}
        names = self.class_names or tuple(
            f"class{c}" for c in range(len(self.support)))
        for c, name in enumerate(names):
            doc["per_class"].append({"class": name,
                                     "precision": self.precision[c],
                                     "recall": self.recall[c],
                                     "f1": self.f1[c],
                                     "support": self.support[c]})
        for avg in ("macro", "weighted", "micro"):
            for m in ("precision", "recall", "f1"):
                doc[avg][m] = getattr(self, f"{avg}_{m}")
        return doc

    def to_text(self):
        names = self.class_names or tuple(
            f"class{c}" for c in range(len(self.support)))
        width = max(12, max(len(n) for n in names) + 2)
        lines = [f"{'':<{width}}{'precision':>10}{'recall':>10}"
                 f"{'f1':>10}{'support':>10}"]
        for c, name in enumerate(names):
            lines.append(f"{name:<{width}}{self.precision[c]:>10.4f}"
                         f"{self.recall[c]:>10.4f}{self.f1[c]:>10.4f}"
                         f"{self.support[c]:>10d}")
        lines.append("")
        total = int(sum(self.support))
        lines.append(f"{'accuracy':<{width}}{self.accuracy:>10.4f}"
                     f"{'':>20}{total:>10d}")
        for avg in ("macro", "weighted", "micro"):
            lines.append(f"{avg + ' avg':<{width}}"
                         f"{getattr(self, avg + '_precision'):>10.4f}"
                         f"{getattr(self, avg + '_recall'):>10.4f}"
                         f"{getattr(self, avg + '_f1'):>10.4f}{total:>10d}")
        return "\n".join(lines)


def _f1(p, r):
    return 2.0 * p * r / (p + r) if (p + r) > 0.0 else 0.0


def report(cm: ConfusionMatrix, class_names=None) -> MetricsReport:
    """Per-class and averaged metrics with pinned zero conventions:
    empty predicted column → precision 0; empty true row → recall 0;
    classes with zero support are excluded from macro and weighted means.
    """
    counts = cm.counts
    k = cm.n_classes
    diag = np.diag(counts).astype(np.float64)
    rows = cm.row_sums().astype(np.float64)
    cols = cm.col_sums().astype(np.float64)
    total = cm.total
    if total < 1:
        raise PipelineError("empty confusion matrix")

    precision = tuple(float(diag[c] / cols[c]) if cols[c] > 0 else 0.0
                      for c in range(k))
    recall = tuple(float(diag[c] / rows[c]) if rows[c] > 0 else 0.0
                   for c in range(k))
    f1 = tuple(_f1(precision[c], recall[c]) for c in range(k))
    support = tuple(int(r) for r in rows)

    present = [c for c in range(k) if rows[c] > 0]
    macro = {m: float(np.mean([vals[c] for c in present]))
             for m, vals in (("precision", precision), ("recall", recall),
                             ("f1", f1))}
    weights = rows[present] / rows[present].sum()
    weighted = {m: float(np.sum(weights * np.array([vals[c] for c in present])))
                for m, vals in (("precision", precision), ("recall", recall),
                                ("f1", f1))}
    # pooled counts: TP totals over predicted / true totals both equal the
    # grand total, so micro precision = micro recall = accuracy
    micro_p = float(diag.sum() / cols.sum())
    micro_r = float(diag.sum() / rows.sum())
    return MetricsReport(accuracy=float(cm.trace / total),
                         precision=precision, recall=recall, f1=f1,
                         support=support,
                         macro_precision=macro["precision"],
                         macro_recall=macro["recall"],
                         macro_f1=macro["f1"],
                         weighted_precision=weighted["precision"],
                         weighted_recall=weighted["recall"],
                         weighted_f1=weighted["f1"],
                         micro_precision=micro_p, micro_recall=micro_r,
                         micro_f1=_f1(micro_p, micro_r),
                         class_names=tuple(class_names) if class_names else None)


def evaluate_model(model, X, y, n_classes, class_names=None):
    pred = learners.predict_classes(model, X)
    cm = confusion(y, pred, n_classes)
    return cm, report(cm, class_names), pred


@dataclass
class CrossValidationResult:
    reports: list
    summary: dict  # metric -> {"mean": .., "std": ..}

    def to_dict(self):
        return {"folds": [r.to_dict() for r in self.reports],
                "summary": self.summary}


_SUMMARY_METRICS = ("accuracy", "macro_precision", "macro_recall", "macro_f1")


def cross_validate(ds, plan, kind, config) -> CrossValidationResult:
    """Train/evaluate once per fold with fold-local standardization."""
    X, y = ds.matrix()
    reports = []
    for f in range(plan.k):
        train_idx = plan.train_indices(f)
        test_idx = plan.folds[f]
        means, stds = train_statistics(X, train_idx)
        Z = (X - means) / stds
        model = learners.train_model(kind, Z[train_idx], y[train_idx],
                                     ds.n_classes, config)
        _, rep, _ = evaluate_model(model, Z[test_idx], y[test_idx],
                                   ds.n_classes, ds.class_names)
        reports.append(rep)
    summary = {}
    for metric in _SUMMARY_METRICS:
        values = np.array([getattr(r, metric) for r in reports])
        summary[metric] = {"mean": float(values.mean()),
                           "std": float(values.std())}
    return CrossValidationResult(reports, summary)
