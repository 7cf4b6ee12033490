"""Input coercion helpers shared by the estimators."""

from __future__ import annotations

import hashlib
import json
from numbers import Integral, Real

from .corpus import LabeledSentence, Sentence
from .exceptions import InvalidHyperParameter, LengthMismatch
from .labels import TagScheme
from .spans import TagSequence, collapse_scheme


def check_sentence(x, index: int = 0) -> Sentence:
    if isinstance(x, Sentence):
        return x
    if isinstance(x, LabeledSentence):
        return x.sentence
    if isinstance(x, str):
        raise TypeError("expected a token sequence, got a plain string; pre-tokenize the input")
    return Sentence.from_words(list(x), f"s{index}")


def check_sentences(X) -> list[Sentence]:
    """Accept Sentence / LabeledSentence objects or plain token lists."""
    return [check_sentence(x, i) for i, x in enumerate(X)]


def check_tags(y, sentences, scheme: TagScheme) -> list[TagSequence]:
    """Coerce label lists to ``scheme``; typed input is collapsed for the untyped scheme."""
    if len(y) != len(sentences):
        raise LengthMismatch(f"{len(sentences)} sentences but {len(y)} tag sequences")
    out = []
    for sentence, tags in zip(sentences, y):
        if not isinstance(tags, TagSequence):
            labels = tuple(tags)
            try:
                tags = TagSequence(scheme, labels)
            except ValueError:
                tags = TagSequence(TagScheme.FULL27, labels)
        if scheme is TagScheme.UNTYPED3:
            tags = collapse_scheme(tags)
        elif tags.scheme is not scheme:
            raise LengthMismatch("untyped tags cannot train a typed tagger")
        if len(tags) != len(sentence):
            raise LengthMismatch(
                f"sentence {sentence.id!r}: {len(sentence)} tokens, {len(tags)} tags"
            )
        out.append(tags)
    return out


def check_hyperparameters(epochs, learning_rate) -> None:
    if not isinstance(epochs, Integral) or isinstance(epochs, bool) or epochs < 1:
        raise InvalidHyperParameter(f"epochs must be a positive integer, got {epochs!r}")
    if not isinstance(learning_rate, Real) or not learning_rate > 0:
        raise InvalidHyperParameter(f"learning_rate must be positive, got {learning_rate!r}")


def data_fingerprint(*parts) -> str:
    blob = json.dumps(parts, ensure_ascii=False, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()
