"""Averaged-perceptron classifiers for the sentence gate and the span typer."""

from __future__ import annotations

import warnings

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ..corpus import Corpus, Sentence
from ..exceptions import EmptyCorpus, LengthMismatch, NoSpansInCorpus, SingleClassCorpusWarning
from ..features import CONTEXT_WINDOW, HASH_NAME, SpanQuery, featurize_sentence, featurize_span_query
from ..labels import ENTITY_TYPES, EntityType, entity_type
from ..spans import Span, sentence_entity_label
from ..validation import check_hyperparameters, check_sentence, check_sentences, data_fingerprint
from ._core import AveragedTable, FeatureIndex


class _AveragedPerceptron(BaseEstimator, ClassifierMixin):
    """Multiclass averaged perceptron over hashed binary features.

    Subclasses fix the label set and the featurizer. Predictions take the
    first maximal score, so ties go to the lowest label index.
    """

    kind = None

    def _classes(self):
        raise NotImplementedError

    def _featurize(self, x):
        raise NotImplementedError

    def _encode_label(self, label) -> int:
        raise NotImplementedError

    def _prepare(self, X):
        return list(X)

    def fit(self, X, y):
        check_hyperparameters(self.epochs, self.learning_rate)
        X = self._prepare(X)
        y = list(y)
        if len(X) != len(y):
            raise LengthMismatch(f"{len(X)} samples but {len(y)} labels")
        if not X:
            raise EmptyCorpus("no training samples")
        self.classes_ = tuple(self._classes())
        targets = np.array([self._encode_label(label) for label in y], dtype=np.intp)
        if len(set(targets.tolist())) == 1:
            warnings.warn(
                f"all training samples have label {self.classes_[targets[0]]}",
                SingleClassCorpusWarning,
                stacklevel=2,
            )
        feats = [self._featurize(x) for x in X]
        id_lists = [f.ids for f in feats]
        index = FeatureIndex(np.concatenate(id_lists))
        rows = [index.rows(ids) for ids in id_lists]
        table = AveragedTable((len(index), len(self.classes_)))
        rng = np.random.default_rng(self.random_state)
        for _ in range(self.epochs):
            for k in rng.permutation(len(X)):
                r = rows[k]
                guess = int(np.argmax(table.w[r].sum(axis=0)))
                gold = targets[k]
                if guess != gold:
                    table.add((r, gold), self.learning_rate)
                    table.add((r, guess), -self.learning_rate)
                table.tick()
        self._set_weights(index.ids, table.average())
        self.meta_ = {
            "epochs": int(self.epochs),
            "seed": self.random_state,
            "learning_rate": float(self.learning_rate),
            "averaged": True,
            "hash": HASH_NAME,
            "corpus_fingerprint": data_fingerprint(
                [f.names for f in feats], [str(label) for label in y]
            ),
        }
        return self

    def _set_weights(self, ids, weights):
        keep = np.any(weights != 0, axis=1)
        self.index_ = FeatureIndex(ids[keep])
        self.coef_ = weights[keep]

    def decision_function(self, X) -> np.ndarray:
        check_is_fitted(self, "coef_")
        X = self._prepare(X)
        feats = self.index_.matrix([self._featurize(x).ids for x in X])
        return np.asarray(feats @ self.coef_)

    def predict_index(self, X) -> np.ndarray:
        return np.argmax(self.decision_function(X), axis=1)

    def predict(self, X):
        return [self.classes_[i] for i in self.predict_index(X)]


class SentenceGate(_AveragedPerceptron):
    """Binary classifier: does a sentence contain any entity?

    ``X`` holds :class:`~cascade_ner.corpus.Sentence` objects or token lists;
    ``y`` holds 0/1.
    """

    kind = "gate"

    def __init__(self, epochs=10, learning_rate=1.0, random_state=42):
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.random_state = random_state

    def _classes(self):
        return (0, 1)

    def _prepare(self, X):
        return check_sentences(X)

    def _featurize(self, x):
        return featurize_sentence(x)

    def _encode_label(self, label):
        label = int(label)
        if label not in (0, 1):
            raise ValueError(f"gate labels must be 0 or 1, got {label!r}")
        return label

    def predict(self, X) -> np.ndarray:
        return np.array(super().predict(X), dtype=int)

    def predict_sentence(self, sentence: Sentence) -> int:
        return int(self.predict_index([check_sentence(sentence)])[0])


class SpanTypeClassifier(_AveragedPerceptron):
    """13-way entity-type classifier over span queries.

    ``X`` holds :class:`~cascade_ner.features.SpanQuery` objects; ``y`` holds
    entity types or their canonical names.
    """

    kind = "typer"

    def __init__(self, epochs=10, learning_rate=1.0, random_state=42, window=CONTEXT_WINDOW):
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.random_state = random_state
        self.window = window

    def _classes(self):
        return ENTITY_TYPES

    def _featurize(self, x):
        return featurize_span_query(x, self.window)

    def _encode_label(self, label):
        return entity_type(label).index

    def fit(self, X, y):
        super().fit(X, y)
        self.meta_["window"] = int(self.window)
        return self

    def predict_span(self, sentence: Sentence, span: Span) -> EntityType:
        query = SpanQuery.from_span(sentence, span, self.window)
        return self.classes_[int(self.predict_index([query])[0])]


def gate_training_data(corpus: Corpus):
    return [s.sentence for s in corpus], [sentence_entity_label(s.tags) for s in corpus]


def span_training_data(corpus: Corpus, window: int = CONTEXT_WINDOW):
    queries, types = [], []
    for s in corpus:
        for span in s.spans:
            queries.append(SpanQuery.from_span(s.sentence, span, window))
            types.append(span.type)
    return queries, types


def train_gate(corpus: Corpus, epochs=10, seed=42, learning_rate=1.0) -> SentenceGate:
    if not len(corpus):
        raise EmptyCorpus("cannot train a gate on an empty corpus")
    X, y = gate_training_data(corpus)
    return SentenceGate(epochs=epochs, learning_rate=learning_rate, random_state=seed).fit(X, y)


def train_span_classifier(corpus: Corpus, epochs=10, seed=42, learning_rate=1.0,
                          window=CONTEXT_WINDOW) -> SpanTypeClassifier:
    X, y = span_training_data(corpus, window)
    if not X:
        raise NoSpansInCorpus("corpus contains no entity spans to train on")
    model = SpanTypeClassifier(epochs=epochs, learning_rate=learning_rate, random_state=seed,
                               window=window)
    return model.fit(X, y)


def predict_gate(model: SentenceGate, sentence: Sentence) -> int:
    return model.predict_sentence(sentence)


def predict_span_type(model: SpanTypeClassifier, query: SpanQuery) -> EntityType:
    return model.predict([query])[0]
