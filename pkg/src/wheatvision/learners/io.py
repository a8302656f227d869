"""Versioned JSON persistence for every model kind.

A model file is self-describing: format tag, version, model kind, the full
pipeline config it was trained under, class names, and the standardization
statistics needed to score raw feature vectors. load(save(m)) reproduces
predictions exactly because all parameters are stored as repr-round-trip
floats.
"""

import json
from dataclasses import dataclass

import numpy as np

from ..config import PipelineConfig
from ..errors import ModelFormatError
from .boosting import GradientBoosting
from .ensemble import ModelSpec, StackingEnsemble, VotingEnsemble
from .forest import RandomForest
from .linear import LogisticRegression
from .tree import DecisionTree

FORMAT_TAG = "wheatvision-model"
FORMAT_VERSION = 1

_FLAT_KINDS = {"tree": DecisionTree,
               "forest": RandomForest,
               "gbm": GradientBoosting,
               "logistic": LogisticRegression}


def kind_of(model):
    for kind, cls in _FLAT_KINDS.items():
        if type(model) is cls:
            return kind
    if type(model) is VotingEnsemble:
        return "voting"
    if type(model) is StackingEnsemble:
        return "stacking"
    raise ModelFormatError(f"unsupported model type {type(model).__name__}")


def pack_model(model):
    kind = kind_of(model)
    if kind == "voting":
        payload = {"mode": model.mode,
                   "bases": [pack_model(b) for b in model.bases]}
    elif kind == "stacking":
        payload = {"k": model.k,
                   "seed": model.seed,
                   "meta_step": model.meta_step,
                   "meta_iterations": model.meta_iterations,
                   "meta_l2": model.meta_l2,
                   "spec_names": [s.name for s in model.specs],
                   "meta": model.meta.to_payload(),
                   "bases": [pack_model(b) for b in model.bases]}
    else:
        payload = model.to_payload()
    return {"kind": kind, "payload": payload}


def unpack_model(tagged):
    try:
        kind = tagged["kind"]
        payload = tagged["payload"]
    except (TypeError, KeyError) as exc:
        raise ModelFormatError(f"malformed model payload: {exc}") from exc
    if kind in _FLAT_KINDS:
        return _FLAT_KINDS[kind].from_payload(payload)
    if kind == "voting":
        bases = [unpack_model(b) for b in payload["bases"]]
        return VotingEnsemble(bases, payload["mode"])
    if kind == "stacking":
        return _restore_stacking(payload)
    raise ModelFormatError(f"unknown model kind {kind!r}")


def _restore_stacking(payload):
    model = StackingEnsemble.__new__(StackingEnsemble)
    model.specs = [ModelSpec(name, None) for name in payload["spec_names"]]
    model.k = payload["k"]
    model.seed = payload["seed"]
    model.meta_step = payload["meta_step"]
    model.meta_iterations = payload["meta_iterations"]
    model.meta_l2 = payload["meta_l2"]
    model.meta = LogisticRegression.from_payload(payload["meta"])
    model.bases = [unpack_model(b) for b in payload["bases"]]
    model.n_classes = model.meta.n_classes
    model.n_features = model.bases[0].n_features if model.bases else None
    model.oof_features = None
    return model


@dataclass
class ModelBundle:
    """Everything needed to score a raw 28-dim feature vector."""
    model: object
    class_names: list
    config: PipelineConfig
    feature_means: np.ndarray
    feature_stds: np.ndarray

    @property
    def kind(self):
        return kind_of(self.model)


def save_model(path, bundle: ModelBundle):
    doc = {"format": FORMAT_TAG,
           "version": FORMAT_VERSION,
           "class_names": list(bundle.class_names),
           "config": bundle.config.to_dict(),
           "standardization": {
               "means": np.asarray(bundle.feature_means).tolist(),
               "stds": np.asarray(bundle.feature_stds).tolist()},
           "model": pack_model(bundle.model)}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_model(path) -> ModelBundle:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"cannot read model file {path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_TAG:
        raise ModelFormatError(f"{path} is not a {FORMAT_TAG} file")
    if doc.get("version") != FORMAT_VERSION:
        raise ModelFormatError(
            f"unsupported model format version {doc.get('version')!r}")
    try:
        return ModelBundle(
            model=unpack_model(doc["model"]),
            class_names=list(doc["class_names"]),
            config=PipelineConfig.from_dict(doc["config"]),
            feature_means=np.array(doc["standardization"]["means"]),
            feature_stds=np.array(doc["standardization"]["stds"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model file {path}: {exc}") from exc
