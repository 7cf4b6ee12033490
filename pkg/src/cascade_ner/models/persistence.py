"""JSON model files.

Layout::

    {"format": "cascade-ner-model", "version": 1, "kind": "gate|tagger|typer",
     "scheme": ..., "labels": [...], "weights": {"<feature hash>": [...]},
     "transitions": {...}, "meta": {...}}

Weight rows are keyed by the decimal feature hash in ascending order so that
identical models serialize to identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..exceptions import MalformedJson
from ..labels import entity_type
from ._core import FeatureIndex
from .perceptron import SentenceGate, SpanTypeClassifier
from .tagger import ChainTagger

FORMAT = "cascade-ner-model"
VERSION = 1


def _floats(arr):
    return [float(v) for v in np.asarray(arr).ravel()]


def _weights_to_dict(index: FeatureIndex, coef) -> dict:
    return {str(int(fid)): _floats(row) for fid, row in zip(index.ids, coef)}


def _weights_from_dict(weights: dict, n_labels: int):
    pairs = sorted((int(k), v) for k, v in weights.items())
    ids = np.array([k for k, _ in pairs], dtype=np.uint64)
    coef = np.array([v for _, v in pairs], dtype=float).reshape(len(pairs), n_labels)
    return FeatureIndex(ids), coef


def model_to_dict(model) -> dict:
    doc = {"format": FORMAT, "version": VERSION, "kind": model.kind}
    if isinstance(model, ChainTagger):
        doc["scheme"] = model.scheme_.value
        doc["labels"] = list(model.labels_)
        doc["weights"] = _weights_to_dict(model.index_, model.emission_)
        doc["transitions"] = {
            "start": _floats(model.start_),
            "stop": _floats(model.stop_),
            "matrix": [_floats(row) for row in model.transition_],
        }
    else:
        doc["scheme"] = None
        doc["labels"] = [c if isinstance(c, int) else str(c) for c in model.classes_]
        doc["weights"] = _weights_to_dict(model.index_, model.coef_)
        doc["transitions"] = None
    doc["meta"] = dict(model.meta_)
    return doc


def model_from_dict(doc: dict):
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise MalformedJson("not a cascade-ner model file")
    if doc.get("version") != VERSION:
        raise MalformedJson(f"unsupported model version {doc.get('version')!r}")
    meta = doc.get("meta", {})
    kind = doc.get("kind")
    common = dict(epochs=meta.get("epochs", 10), learning_rate=meta.get("learning_rate", 1.0),
                  random_state=meta.get("seed", 42))
    try:
        labels = doc["labels"]
        if kind == "tagger":
            model = ChainTagger(scheme=doc["scheme"], **common)
            model.labels_ = model.scheme_.labels
            if list(labels) != list(model.labels_):
                raise MalformedJson("tagger label list does not match its scheme")
            n = len(labels)
            model.index_, model.emission_ = _weights_from_dict(doc["weights"], n)
            tr = doc["transitions"]
            model.start_ = np.array(tr["start"], dtype=float)
            model.stop_ = np.array(tr["stop"], dtype=float)
            model.transition_ = np.array(tr["matrix"], dtype=float).reshape(n, n)
        elif kind == "gate":
            model = SentenceGate(**common)
            model.classes_ = tuple(int(c) for c in labels)
            model.index_, model.coef_ = _weights_from_dict(doc["weights"], len(labels))
        elif kind == "typer":
            model = SpanTypeClassifier(window=meta.get("window", 3), **common)
            model.classes_ = tuple(entity_type(c) for c in labels)
            model.index_, model.coef_ = _weights_from_dict(doc["weights"], len(labels))
        else:
            raise MalformedJson(f"unknown model kind {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, MalformedJson):
            raise
        raise MalformedJson(f"invalid model file: {exc}") from None
    model.meta_ = dict(meta)
    return model


def dumps_model(model) -> str:
    return json.dumps(model_to_dict(model), ensure_ascii=False, separators=(",", ":")) + "\n"


def save_model(model, path) -> None:
    Path(path).write_text(dumps_model(model), encoding="utf-8")


def load_model(path):
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedJson(f"{path}: {exc}") from None
    return model_from_dict(doc)
