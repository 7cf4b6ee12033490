"""Sparse binary feature templates for the native linear models.

Feature strings are hashed to unsigned 64-bit ids with BLAKE2b (8-byte
digest); collisions are accepted.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .corpus import Sentence
from .spans import Span

HASH_NAME = "blake2b-64"
BOS = "<BOS>"
EOS = "<EOS>"
CONTEXT_WINDOW = 3
NEIGHBOR_OFFSETS = (-2, -1, 1, 2)


@lru_cache(maxsize=1 << 20)
def feature_hash(name: str) -> int:
    return int.from_bytes(hashlib.blake2b(name.encode("utf-8"), digest_size=8).digest(), "big")


@dataclass(frozen=True)
class FeatureVector:
    """Set of active features; every activation has weight 1.0."""

    names: tuple[str, ...]

    @classmethod
    def from_names(cls, names) -> "FeatureVector":
        return cls(tuple(dict.fromkeys(names)))

    @property
    def ids(self) -> np.ndarray:
        return np.array(sorted({feature_hash(n) for n in self.names}), dtype=np.uint64)

    def __contains__(self, name):
        return name in self.names

    def __len__(self):
        return len(self.names)


def word_shape(word: str) -> str:
    out = []
    for ch in word:
        if ch.isdigit():
            out.append("d")
        elif ch.isalpha():
            out.append("X" if ch.isupper() else "x")
        else:
            out.append(ch)
    return "".join(out)


def _word_features(word: str, suffix: str = "") -> list[str]:
    feats = [
        f"w{suffix}={word}",
        f"lw{suffix}={word.lower()}",
        f"shape{suffix}={word_shape(word)}",
    ]
    for k in (1, 2, 3):
        if len(word) >= k:
            feats.append(f"p{k}{suffix}={word[:k]}")
            feats.append(f"s{k}{suffix}={word[-k:]}")
    if word[:1].isupper():
        feats.append(f"cap{suffix}=1")
    if word.isupper():
        feats.append(f"allcaps{suffix}=1")
    if any(ch.isdigit() for ch in word):
        feats.append(f"digit{suffix}=1")
    return feats


def featurize_token(sentence: Sentence, i: int) -> FeatureVector:
    n = len(sentence)
    if not 0 <= i < n:
        raise IndexError(f"token index {i} out of range for sentence of length {n}")
    words = sentence.words
    feats = ["bias"]
    feats += _word_features(words[i])
    for off in NEIGHBOR_OFFSETS:
        j = i + off
        suffix = f"[{off:+d}]"
        if j < 0:
            feats.append(f"w{suffix}={BOS}")
        elif j >= n:
            feats.append(f"w{suffix}={EOS}")
        else:
            feats += _word_features(words[j], suffix)
    return FeatureVector.from_names(feats)


def featurize_sentence(sentence: Sentence) -> FeatureVector:
    feats = ["bias"]
    lowered = [BOS] + [w.lower() for w in sentence.words] + [EOS]
    for w in sentence.words:
        feats += (f"w={w}", f"lw={w.lower()}", f"shape={word_shape(w)}")
    for a, b in zip(lowered, lowered[1:]):
        feats.append(f"bg={a}|{b}")
    return FeatureVector.from_names(feats)


@dataclass(frozen=True)
class SpanQuery:
    span_text: str
    left_context: tuple[str, ...]
    right_context: tuple[str, ...]
    sentence_text: str

    @classmethod
    def from_span(cls, sentence: Sentence, span: Span, window: int = CONTEXT_WINDOW) -> "SpanQuery":
        words = sentence.words
        if span.end > len(words):
            raise IndexError(f"{span!r} exceeds sentence length {len(words)}")
        return cls(
            span_text=" ".join(words[span.start:span.end]),
            left_context=tuple(words[max(0, span.start - window):span.start]),
            right_context=tuple(words[span.end:span.end + window]),
            sentence_text=sentence.text,
        )

    @property
    def prompt(self) -> str:
        return f"What is {self.span_text} in the sentence: {self.sentence_text}"


def _length_bucket(n: int) -> str:
    return str(n) if n < 5 else "5+"


def featurize_span_query(q: SpanQuery, window: int = CONTEXT_WINDOW) -> FeatureVector:
    span_words = q.span_text.split(" ")
    feats = [
        "bias",
        f"span={q.span_text}",
        f"lspan={q.span_text.lower()}",
        f"sshape={' '.join(word_shape(w) for w in span_words)}",
        f"len={_length_bucket(len(span_words))}",
    ]
    for w in span_words:
        feats += (f"stok={w.lower()}", f"stokshape={word_shape(w)}")
    last = span_words[-1]
    for k in (2, 3):
        if len(last) >= k:
            feats.append(f"hs{k}={last[-k:].lower()}")
    left = list(reversed(q.left_context))
    right = list(q.right_context)
    for d in range(1, window + 1):
        lw = left[d - 1].lower() if d <= len(left) else BOS
        rw = right[d - 1].lower() if d <= len(right) else EOS
        feats += (f"left-{d}={lw}", f"right+{d}={rw}", f"ctx={lw}", f"ctx={rw}")
    feats.append(f"left-1|span={left[0].lower() if left else BOS}|{q.span_text.lower()}")
    return FeatureVector.from_names(feats)
