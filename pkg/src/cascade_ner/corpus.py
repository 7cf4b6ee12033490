"""Tokenized BIO corpora: data model, CoNLL I/O and dataset statistics.

File format: UTF-8, one ``<token>\\t<label>`` line per token, one blank line
after every sentence. A block may open with a ``# sent_id = <id>`` line;
otherwise sentences are named ``s<block index>``.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Iterable, Sequence

from .exceptions import (
    EmptyCorpus,
    InvalidCorpus,
    InvalidToken,
    LengthMismatch,
    MalformedLine,
    UnknownLabel,
)
from .labels import ENTITY_TYPES, EntityGroup, EntityType, TagScheme
from .spans import Span, TagSequence, decode_bio

SENT_ID_PREFIX = "# sent_id = "


@dataclass(frozen=True)
class Token:
    text: str
    index: int

    def __post_init__(self):
        if not isinstance(self.text, str) or not self.text:
            raise InvalidToken(f"token {self.index} is empty")
        if "\t" in self.text or "\n" in self.text or "\r" in self.text:
            raise InvalidToken(f"token {self.text!r} contains a tab or line break")


@dataclass(frozen=True)
class Sentence:
    id: str
    tokens: tuple[Token, ...]

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if not self.tokens:
            raise InvalidCorpus(f"sentence {self.id!r} has no tokens")
        for i, tok in enumerate(self.tokens):
            if tok.index != i:
                raise InvalidCorpus(f"sentence {self.id!r}: token indices must be 0..n-1")

    @classmethod
    def from_words(cls, words: Sequence[str], id: str = "s0") -> "Sentence":
        return cls(str(id), tuple(Token(w, i) for i, w in enumerate(words)))

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(t.text for t in self.tokens)

    @property
    def text(self) -> str:
        return " ".join(self.words)

    def __len__(self):
        return len(self.tokens)


@dataclass(frozen=True)
class LabeledSentence:
    sentence: Sentence
    tags: TagSequence

    def __post_init__(self):
        if self.tags.scheme is not TagScheme.FULL27:
            raise UnknownLabel("corpus tags must use the 27-label scheme")
        if len(self.tags) != len(self.sentence):
            raise LengthMismatch(
                f"sentence {self.sentence.id!r}: {len(self.sentence)} tokens, {len(self.tags)} tags"
            )

    @property
    def id(self) -> str:
        return self.sentence.id

    @property
    def spans(self) -> list[Span]:
        return decode_bio(self.tags)

    def __len__(self):
        return len(self.sentence)


@dataclass(frozen=True)
class Corpus:
    sentences: tuple[LabeledSentence, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))
        seen = set()
        for s in self.sentences:
            if s.id in seen:
                raise InvalidCorpus(f"duplicate sentence id {s.id!r}")
            seen.add(s.id)

    @classmethod
    def from_lists(cls, words_and_tags: Iterable[tuple[Sequence[str], Sequence[str]]]) -> "Corpus":
        """Build a corpus from ``(words, labels)`` pairs with positional ids."""
        return cls(tuple(
            LabeledSentence(Sentence.from_words(words, f"s{i}"), TagSequence(TagScheme.FULL27, tags))
            for i, (words, tags) in enumerate(words_and_tags)
        ))

    def __len__(self):
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)

    def __getitem__(self, i):
        return self.sentences[i]

    def by_id(self) -> dict[str, LabeledSentence]:
        return {s.id: s for s in self.sentences}

    def subset(self, keep) -> "Corpus":
        return Corpus(tuple(s for s in self.sentences if keep(s)))

    def fingerprint(self) -> str:
        return hashlib.sha256(serialize_conll(self).encode("utf-8")).hexdigest()


def parse_conll(text: str) -> Corpus:
    """Parse CoNLL-style ``token<TAB>label`` text into a corpus."""
    sentences = []
    words: list[str] = []
    labels: list[str] = []
    sent_id = None
    block_start = 1

    def flush(lineno):
        nonlocal words, labels, sent_id
        sid = sent_id if sent_id is not None else f"s{len(sentences)}"
        try:
            sentence = Sentence.from_words(words, sid)
            tags = TagSequence(TagScheme.FULL27, labels)
        except UnknownLabel as exc:
            raise UnknownLabel(f"sentence starting at line {lineno}: {exc}") from None
        sentences.append(LabeledSentence(sentence, tags))
        words, labels, sent_id = [], [], None

    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for lineno, line in enumerate(lines, 1):
        if line == "":
            if not words:
                raise MalformedLine(lineno, "blank line without a preceding sentence")
            flush(block_start)
            continue
        if not words:
            block_start = lineno
            if sent_id is None and line.startswith(SENT_ID_PREFIX) and "\t" not in line:
                sent_id = line[len(SENT_ID_PREFIX):]
                if not sent_id:
                    raise MalformedLine(lineno, "empty sentence id")
                continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise MalformedLine(lineno, f"expected 2 tab-separated columns, got {len(parts)}")
        word, label = parts
        if not word:
            raise MalformedLine(lineno, "empty token")
        try:
            TagSequence(TagScheme.FULL27, (label,))
        except UnknownLabel:
            raise UnknownLabel(f"line {lineno}: label {label!r} is not in the 27-label inventory") from None
        words.append(word)
        labels.append(label)
    if words:
        flush(block_start)
    elif sent_id is not None:
        raise MalformedLine(len(lines), "sentence id without tokens")
    if not sentences:
        raise EmptyCorpus("no sentences found")
    return Corpus(tuple(sentences))


def serialize_conll(corpus: Corpus) -> str:
    if not corpus.sentences:
        raise InvalidCorpus("cannot serialize an empty corpus")
    out = []
    for i, s in enumerate(corpus.sentences):
        if s.id != f"s{i}":
            out.append(f"{SENT_ID_PREFIX}{s.id}\n")
        for word, label in zip(s.sentence.words, s.tags.labels):
            out.append(f"{word}\t{label}\n")
        out.append("\n")
    return "".join(out)


def read_conll(path) -> Corpus:
    return parse_conll(Path(path).read_text(encoding="utf-8"))


def write_conll(corpus: Corpus, path) -> None:
    Path(path).write_text(serialize_conll(corpus), encoding="utf-8")


@dataclass(frozen=True)
class StatsReport:
    sentence_count: int
    sentences_with_entity: int
    total_entities: int
    max_length: int
    avg_length: Decimal
    per_type_counts: dict[EntityType, int] = field(default_factory=dict)
    per_group_totals: dict[EntityGroup, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "sentence_count": self.sentence_count,
            "sentences_with_entity": self.sentences_with_entity,
            "total_entities": self.total_entities,
            "max_length": self.max_length,
            "avg_length": float(self.avg_length),
            "per_type_counts": {str(t): self.per_type_counts[t] for t in ENTITY_TYPES},
            "per_group_totals": {g.value: self.per_group_totals[g] for g in EntityGroup},
        }


def entity_distribution(corpus: Corpus) -> tuple[dict[EntityType, int], dict[EntityGroup, int]]:
    types = Counter(span.type for s in corpus for span in s.spans)
    per_type = {t: types.get(t, 0) for t in ENTITY_TYPES}
    per_group = {g: 0 for g in EntityGroup}
    for t, n in per_type.items():
        per_group[t.group] += n
    return per_type, per_group


def corpus_stats(corpus: Corpus) -> StatsReport:
    lengths = [len(s) for s in corpus]
    with_entity = sum(1 for s in corpus if s.spans)
    per_type, per_group = entity_distribution(corpus)
    if lengths:
        avg = (Decimal(sum(lengths)) / Decimal(len(lengths))).quantize(Decimal("0.01"), ROUND_HALF_UP)
    else:
        avg = Decimal("0.00")
    return StatsReport(
        sentence_count=len(lengths),
        sentences_with_entity=with_entity,
        total_entities=sum(per_type.values()),
        max_length=max(lengths, default=0),
        avg_length=avg,
        per_type_counts=per_type,
        per_group_totals=per_group,
    )
