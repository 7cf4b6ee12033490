"""Linear-chain tagger trained with the averaged structured perceptron."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ..corpus import Corpus, Sentence
from ..exceptions import EmptyCorpus
from ..features import HASH_NAME, featurize_token
from ..labels import TagScheme
from ..spans import TagSequence
from ..validation import (
    check_hyperparameters,
    check_sentence,
    check_sentences,
    check_tags,
    data_fingerprint,
)
from ._core import AveragedTable, FeatureIndex


def viterbi(emissions, transitions, start, stop):
    """Best label path for one sequence.

    ``emissions`` is ``(n, L)``; ``transitions[a, b]`` scores label ``a``
    followed by ``b``. Returns ``(path, score)``. Every backpointer and the
    final choice take the lowest index among equal scores.
    """
    emissions = np.asarray(emissions, dtype=float)
    n, n_labels = emissions.shape
    if n == 0:
        return [], 0.0
    score = start + emissions[0]
    back = np.zeros((n, n_labels), dtype=np.intp)
    for i in range(1, n):
        cand = score[:, None] + transitions
        back[i] = np.argmax(cand, axis=0)
        score = cand[back[i], np.arange(n_labels)] + emissions[i]
    final = score + stop
    last = int(np.argmax(final))
    path = [last]
    for i in range(n - 1, 0, -1):
        path.append(int(back[i][path[-1]]))
    path.reverse()
    return path, float(final[last])


def path_score(path, emissions, transitions, start, stop) -> float:
    total = start[path[0]] + stop[path[-1]]
    for i, label in enumerate(path):
        total += emissions[i][label]
        if i:
            total += transitions[path[i - 1], label]
    return float(total)


class ChainTagger(BaseEstimator):
    """Sequence tagger over the 27-label or untyped 3-label BIO scheme.

    ``fit`` takes sentences (or token lists) and their label lists; for the
    untyped scheme typed gold labels are collapsed to ``O``/``B``/``I``
    first. ``predict`` returns one label list per sentence.
    """

    kind = "tagger"

    def __init__(self, scheme="untyped3", epochs=10, learning_rate=1.0, random_state=42):
        self.scheme = scheme
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.random_state = random_state

    @property
    def scheme_(self) -> TagScheme:
        return TagScheme.parse(self.scheme)

    def _token_ids(self, sentence):
        return [featurize_token(sentence, i).ids for i in range(len(sentence))]

    def fit(self, X, y):
        check_hyperparameters(self.epochs, self.learning_rate)
        scheme = self.scheme_
        sentences = check_sentences(X)
        if not sentences:
            raise EmptyCorpus("no training sentences")
        tags = check_tags(y, sentences, scheme)
        self.labels_ = scheme.labels
        label_index = {label: i for i, label in enumerate(self.labels_)}
        golds = [np.array([label_index[t] for t in seq.labels], dtype=np.intp) for seq in tags]

        token_ids = [self._token_ids(s) for s in sentences]
        index = FeatureIndex(np.concatenate([ids for sent in token_ids for ids in sent]))
        mats = [index.matrix(sent) for sent in token_ids]

        n_labels = len(self.labels_)
        emit = AveragedTable((len(index), n_labels))
        trans = AveragedTable((n_labels, n_labels))
        start = AveragedTable(n_labels)
        stop = AveragedTable(n_labels)
        lr = float(self.learning_rate)
        rng = np.random.default_rng(self.random_state)
        for _ in range(self.epochs):
            for k in rng.permutation(len(sentences)):
                feats, gold = mats[k], golds[k]
                pred, _ = viterbi(feats @ emit.w, trans.w, start.w, stop.w)
                pred = np.asarray(pred, dtype=np.intp)
                if not np.array_equal(pred, gold):
                    for i in np.flatnonzero(pred != gold):
                        rows = feats.indices[feats.indptr[i]:feats.indptr[i + 1]]
                        emit.add((rows, gold[i]), lr)
                        emit.add((rows, pred[i]), -lr)
                    for path, sign in ((gold, lr), (pred, -lr)):
                        start.add(path[0], sign)
                        stop.add(path[-1], sign)
                        for a, b in zip(path[:-1], path[1:]):
                            trans.add((a, b), sign)
                emit.tick()
                trans.tick()
                start.tick()
                stop.tick()

        weights = emit.average()
        keep = np.any(weights != 0, axis=1)
        self.index_ = FeatureIndex(index.ids[keep])
        self.emission_ = weights[keep]
        self.transition_ = trans.average()
        self.start_ = start.average()
        self.stop_ = stop.average()
        self.meta_ = {
            "epochs": int(self.epochs),
            "seed": self.random_state,
            "learning_rate": float(self.learning_rate),
            "averaged": True,
            "hash": HASH_NAME,
            "corpus_fingerprint": data_fingerprint(
                [s.words for s in sentences], [t.labels for t in tags]
            ),
        }
        return self

    def emissions(self, sentence: Sentence) -> np.ndarray:
        check_is_fitted(self, "emission_")
        return np.asarray(self.index_.matrix(self._token_ids(sentence)) @ self.emission_)

    def tag_sentence(self, sentence: Sentence) -> TagSequence:
        return viterbi_decode(self, check_sentence(sentence))

    def predict(self, X) -> list[list[str]]:
        return [list(self.tag_sentence(s).labels) for s in check_sentences(X)]


def viterbi_decode(model: ChainTagger, sentence: Sentence) -> TagSequence:
    path, _ = viterbi(model.emissions(sentence), model.transition_, model.start_, model.stop_)
    return TagSequence(model.scheme_, tuple(model.labels_[i] for i in path))


def train_tagger(corpus: Corpus, scheme=TagScheme.UNTYPED3, epochs=10, seed=42,
                 learning_rate=1.0) -> ChainTagger:
    if not len(corpus):
        raise EmptyCorpus("cannot train a tagger on an empty corpus")
    scheme = TagScheme.parse(scheme)
    model = ChainTagger(scheme=scheme.value, epochs=epochs, learning_rate=learning_rate,
                        random_state=seed)
    return model.fit([s.sentence for s in corpus], [s.tags for s in corpus])
