from .external import (
    ExternalGate,
    ExternalPredictions,
    ExternalTagger,
    ExternalTyper,
    load_external_predictions,
    parse_external_predictions,
)
from .perceptron import (
    SentenceGate,
    SpanTypeClassifier,
    predict_gate,
    predict_span_type,
    train_gate,
    train_span_classifier,
)
from .persistence import dumps_model, load_model, model_from_dict, model_to_dict, save_model
from .tagger import ChainTagger, path_score, train_tagger, viterbi, viterbi_decode

__all__ = [
    "ChainTagger",
    "ExternalGate",
    "ExternalPredictions",
    "ExternalTagger",
    "ExternalTyper",
    "SentenceGate",
    "SpanTypeClassifier",
    "dumps_model",
    "load_external_predictions",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "parse_external_predictions",
    "path_score",
    "predict_gate",
    "predict_span_type",
    "save_model",
    "train_gate",
    "train_span_classifier",
    "train_tagger",
    "viterbi",
    "viterbi_decode",
]
