"""Report figures rendered headlessly to PNG files."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def confusion_heatmap(cm, class_names, path):
    """Annotated heatmap of the confusion matrix counts."""
    counts = cm.counts
    k = cm.n_classes
    names = class_names or [f"class{c}" for c in range(k)]
    fig, ax = plt.subplots(figsize=(1.2 * k + 2.5, 1.2 * k + 2))
    im = ax.imshow(counts, cmap="Blues")
    ax.set_xticks(range(k), names, rotation=45, ha="right")
    ax.set_yticks(range(k), names)
    ax.set_xlabel("predicted")
    ax.set_ylabel("true")
    cutoff = counts.max() / 2 if counts.max() else 0
    for t in range(k):
        for p in range(k):
            ax.text(p, t, str(int(counts[t, p])), ha="center", va="center",
                    color="white" if counts[t, p] > cutoff else "black")
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def metrics_bars(rep, path):
    """Grouped per-class precision/recall/F1 bars."""
    k = len(rep.support)
    names = rep.class_names or [f"class{c}" for c in range(k)]
    x = np.arange(k)
    width = 0.27
    fig, ax = plt.subplots(figsize=(1.6 * k + 3, 4.5))
    ax.bar(x - width, rep.precision, width, label="precision")
    ax.bar(x, rep.recall, width, label="recall")
    ax.bar(x + width, rep.f1, width, label="F1")
    ax.set_xticks(x, names, rotation=30, ha="right")
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("score")
    ax.set_title(f"accuracy {rep.accuracy:.4f}")
    ax.legend(loc="lower right")
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
