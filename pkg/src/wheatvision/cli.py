"""Command-line pipeline driver.

Subcommands: extract, train, evaluate, predict, report. Exit codes:
0 success, 1 data/processing error, 2 usage error. Config precedence is
CLI flag > config file > built-in default; evaluate/predict/report always
run under the config embedded in the model file so inference can never use
mismatched extraction settings.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import dataset as dsm
from . import learners
from .config import PipelineConfig
from .errors import ClassSetMismatch, PipelineError
from .features import extract_from_path
from .metrics import cross_validate, evaluate_model
from .segmentation import mask_to_png
from .texture import glcm_to_csv

# flags that mirror PipelineConfig fields; dest names match the attributes
_CONFIG_FLAGS = (
    ("--canny-low", float, "Canny low threshold (0..1020 gradient scale)"),
    ("--canny-high", float, "Canny high threshold"),
    ("--canny-sigma", float, "Gaussian sigma before the gradient"),
    ("--seg-threshold", int, "foreground threshold on gray values"),
    ("--glcm-distance", int, "co-occurrence offset in pixels"),
    ("--glcm-levels", int, "gray levels after quantization"),
    ("--workers", int, "parallel extraction workers"),
    ("--seed", int, "master seed for every randomized step"),
    ("--test-fraction", float, "held-out fraction for train/test split"),
    ("--tree-max-depth", int, "decision tree depth limit"),
    ("--forest-trees", int, "number of trees in the forest"),
    ("--gbm-rounds", int, "boosting rounds"),
    ("--gbm-learning-rate", float, "boosting shrinkage"),
    ("--gbm-max-depth", int, "boosting tree depth"),
    ("--voting-mode", str, "hard or soft voting"),
    ("--stacking-folds", int, "out-of-fold folds for stacking"),
    ("--cv-folds", int, "folds for report --cv"),
)


def _add_config_flags(sub):
    sub.add_argument("--config", metavar="JSON",
                     help="config file; flags override its values")
    for flag, typ, help_text in _CONFIG_FLAGS:
        sub.add_argument(flag, type=typ, default=None, help=help_text)


def _resolve_config(args) -> PipelineConfig:
    if getattr(args, "config", None):
        config = PipelineConfig.load(args.config)
    else:
        config = PipelineConfig()
    for flag, _, _ in _CONFIG_FLAGS:
        attr = flag.lstrip("-").replace("-", "_")
        value = getattr(args, attr, None)
        if value is not None:
            setattr(config, attr, value)
    config.validate()
    return config


def _write_json(path, doc):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
        fh.write("\n")


def _warn(message):
    print(f"warning: {message}", file=sys.stderr)


def _load_features(path, config, mask_dir=None) -> dsm.Dataset:
    """Accept either a dataset directory or a feature cache CSV."""
    path = Path(path)
    if path.is_dir():
        return dsm.ingest_directory(path, config, on_warning=_warn,
                                    mask_dir=mask_dir)
    return dsm.read_csv(path)


def _check_classes(bundle, ds):
    if ds.n_classes != len(bundle.class_names):
        raise ClassSetMismatch(
            f"model has {len(bundle.class_names)} classes, "
            f"features have {ds.n_classes}")


def cmd_extract(args):
    config = _resolve_config(args)
    ds = dsm.ingest_directory(args.dataset_dir, config, on_warning=_warn,
                              mask_dir=args.dump_masks)
    dsm.write_csv(ds, args.out_csv)
    per_class = ", ".join(f"{name} {count}" for name, count
                          in zip(ds.class_names, ds.class_counts()))
    print(f"wrote {len(ds)} rows to {args.out_csv} "
          f"({per_class}; skipped {ds.skipped})")
    return 0


def cmd_train(args):
    config = _resolve_config(args)
    ds = _load_features(args.features, config)
    plan = dsm.split(ds, config.test_fraction, config.seed)
    X, y = ds.matrix()
    means, stds = dsm.train_statistics(X, plan.train)
    Z = (X - means) / stds

    model = learners.train_model(args.model, Z[plan.train], y[plan.train],
                                 ds.n_classes, config)
    cm, rep, pred = evaluate_model(model, Z[plan.test], y[plan.test],
                                   ds.n_classes, ds.class_names)

    bundle = learners.ModelBundle(model=model, class_names=ds.class_names,
                                  config=config, feature_means=means,
                                  feature_stds=stds)
    learners.save_model(args.out, bundle)

    test_predictions = []
    for row, true, p in zip(plan.test, y[plan.test], pred):
        proba = model.predict_proba(Z[row][None, :])[0]
        test_predictions.append({"source": ds.samples[row].source,
                                 "true": ds.class_names[true],
                                 "predicted": ds.class_names[p],
                                 "proba": [float(v) for v in proba]})
    report_path = args.report or str(
        Path(args.out).with_name(Path(args.out).stem + ".report.json"))
    _write_json(report_path, {"model": args.model,
                              "config": config.to_dict(),
                              "train_size": len(plan.train),
                              "test_size": len(plan.test),
                              "confusion": cm.counts.tolist(),
                              "report": rep.to_dict(),
                              "test_predictions": test_predictions})

    print(f"trained {args.model} on {len(plan.train)} samples, "
          f"tested on {len(plan.test)}")
    print(rep.to_text())
    print(f"model written to {args.out}")
    print(f"report written to {report_path}")
    return 0


def cmd_evaluate(args):
    bundle = learners.load_model(args.model)
    ds = _load_features(args.features, bundle.config)
    _check_classes(bundle, ds)
    X, y = ds.matrix()
    Z = (X - bundle.feature_means) / bundle.feature_stds
    cm, rep, _ = evaluate_model(bundle.model, Z, y, ds.n_classes,
                                bundle.class_names)
    print(rep.to_text())
    if args.json:
        _write_json(args.json, {"model": bundle.kind,
                                "confusion": cm.counts.tolist(),
                                "report": rep.to_dict()})
        print(f"metrics written to {args.json}")
    if args.confusion_csv:
        cm.to_csv(args.confusion_csv, bundle.class_names)
        print(f"confusion matrix written to {args.confusion_csv}")
    return 0


def cmd_predict(args):
    bundle = learners.load_model(args.model)
    result = extract_from_path(args.image, bundle.config)
    z = dsm.apply_standardization(result.features, bundle.feature_means,
                                  bundle.feature_stds)
    proba = learners.predict_one(bundle.model, z)
    winner = int(np.argmax(proba))
    if args.dump_mask:
        mask_to_png(result.mask, args.dump_mask)
    if args.dump_glcm:
        glcm_to_csv(result.glcm, args.dump_glcm)
    if result.used_whole_image_roi:
        _warn("empty segmentation mask; features use the whole image")
    print(f"prediction: {bundle.class_names[winner]}")
    for name, p in zip(bundle.class_names, proba):
        print(f"  {name} {float(p)!r}")
    return 0


def cmd_report(args):
    from .figures import confusion_heatmap, metrics_bars

    bundle = learners.load_model(args.model)
    ds = _load_features(args.features, bundle.config)
    _check_classes(bundle, ds)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    X, y = ds.matrix()
    Z = (X - bundle.feature_means) / bundle.feature_stds
    cm, rep, _ = evaluate_model(bundle.model, Z, y, ds.n_classes,
                                bundle.class_names)

    cm.to_csv(out_dir / "confusion.csv", bundle.class_names)
    _write_json(out_dir / "metrics.json", {"model": bundle.kind,
                                           "confusion": cm.counts.tolist(),
                                           "report": rep.to_dict()})
    (out_dir / "metrics.txt").write_text(rep.to_text() + "\n",
                                         encoding="utf-8")
    confusion_heatmap(cm, bundle.class_names, out_dir / "confusion.png")
    metrics_bars(rep, out_dir / "metrics.png")
    written = ["confusion.csv", "metrics.json", "metrics.txt",
               "confusion.png", "metrics.png"]

    if args.cv:
        cv = cross_validate(ds, dsm.kfold(ds, bundle.config.cv_folds,
                                          bundle.config.seed),
                            bundle.kind, bundle.config)
        _write_json(out_dir / "cv.json", cv.to_dict())
        written.append("cv.json")
        acc = cv.summary["accuracy"]
        print(f"cross-validation accuracy {acc['mean']:.4f} "
              f"+/- {acc['std']:.4f} over {bundle.config.cv_folds} folds")

    print(rep.to_text())
    print(f"report artifacts in {out_dir}: {', '.join(written)}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wheatvision",
        description="Leaf-image classification via segmentation-driven "
                    "shape and texture features with tree ensembles.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("extract", help="dataset dir -> feature CSV")
    p.add_argument("dataset_dir")
    p.add_argument("out_csv")
    p.add_argument("--dump-masks", metavar="DIR",
                   help="also save segmentation masks as PNGs")
    _add_config_flags(p)
    p.set_defaults(func=cmd_extract)

    p = subs.add_parser("train", help="fit a model on features")
    p.add_argument("features", help="feature CSV or dataset directory")
    p.add_argument("--model", required=True, choices=learners.MODEL_KINDS)
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--report", help="report JSON path "
                                    "(default: <out>.report.json)")
    _add_config_flags(p)
    p.set_defaults(func=cmd_train)

    p = subs.add_parser("evaluate", help="score a model on features")
    p.add_argument("model")
    p.add_argument("features", help="feature CSV or dataset directory")
    p.add_argument("--json", help="write metrics JSON here")
    p.add_argument("--confusion-csv", help="write confusion matrix CSV here")
    p.set_defaults(func=cmd_evaluate)

    p = subs.add_parser("predict", help="classify a single image")
    p.add_argument("model")
    p.add_argument("image")
    p.add_argument("--dump-mask", metavar="PNG",
                   help="save the segmentation mask")
    p.add_argument("--dump-glcm", metavar="CSV",
                   help="save the co-occurrence matrix")
    p.set_defaults(func=cmd_predict)

    p = subs.add_parser("report", help="evaluation artifacts + figures")
    p.add_argument("model")
    p.add_argument("features", help="feature CSV or dataset directory")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--cv", action="store_true",
                   help="also run k-fold cross-validation")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
