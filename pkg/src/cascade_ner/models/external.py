"""File-based injection of externally produced predictions.

JSONL, one object per line, keyed by ``sentence_id`` and carrying any of
``tags`` (word-level labels), ``gate`` (0/1) and ``span_types`` (list of
``{"start", "end", "type"}``). Several records may share an id as long as
they do not repeat a field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..corpus import Corpus, Sentence
from ..exceptions import (
    DuplicatePrediction,
    LengthMismatch,
    MalformedJson,
    MissingPrediction,
    SpanOutOfRange,
    UnknownSentenceId,
)
from ..labels import EntityType, TagScheme, entity_type, infer_scheme
from ..spans import Span, TagSequence

FIELDS = ("tags", "gate", "span_types")


@dataclass
class ExternalPredictions:
    tags: dict[str, tuple[str, ...]] = field(default_factory=dict)
    gate: dict[str, int] = field(default_factory=dict)
    span_types: dict[str, dict[tuple[int, int], EntityType]] = field(default_factory=dict)
    scheme: TagScheme | None = None
    source: str = "<memory>"

    @property
    def provides(self) -> set[str]:
        return {name for name in FIELDS if getattr(self, name)}

    def validate(self, corpus: Corpus) -> "ExternalPredictions":
        sentences = corpus.by_id()
        for name in FIELDS:
            for sid in getattr(self, name):
                if sid not in sentences:
                    raise UnknownSentenceId(f"{self.source}: unknown sentence id {sid!r}")
        for sid, labels in self.tags.items():
            n = len(sentences[sid])
            if len(labels) != n:
                raise LengthMismatch(
                    f"{self.source}: sentence {sid!r} has {n} tokens but {len(labels)} tags"
                )
        for sid, spans in self.span_types.items():
            n = len(sentences[sid])
            for start, end in spans:
                if end > n:
                    raise SpanOutOfRange(
                        f"{self.source}: span [{start}, {end}) exceeds sentence {sid!r} length {n}"
                    )
        return self


def _parse_record(rec, lineno, source):
    if not isinstance(rec, dict) or not isinstance(rec.get("sentence_id"), str):
        raise MalformedJson(f"{source}:{lineno}: record needs a string 'sentence_id'")
    unknown = set(rec) - {"sentence_id", *FIELDS}
    if unknown:
        raise MalformedJson(f"{source}:{lineno}: unexpected fields {sorted(unknown)}")
    parsed = {}
    if "tags" in rec:
        if not isinstance(rec["tags"], list) or not all(isinstance(t, str) for t in rec["tags"]):
            raise MalformedJson(f"{source}:{lineno}: 'tags' must be a list of strings")
        parsed["tags"] = tuple(rec["tags"])
    if "gate" in rec:
        if rec["gate"] not in (0, 1) or isinstance(rec["gate"], bool):
            raise MalformedJson(f"{source}:{lineno}: 'gate' must be 0 or 1")
        parsed["gate"] = int(rec["gate"])
    if "span_types" in rec:
        spans = {}
        try:
            for item in rec["span_types"]:
                span = Span(int(item["start"]), int(item["end"]), entity_type(item["type"]))
                if span.bounds in spans:
                    raise DuplicatePrediction(
                        f"{source}:{lineno}: span {list(span.bounds)} typed twice"
                    )
                spans[span.bounds] = span.type
        except (KeyError, TypeError) as exc:
            raise MalformedJson(f"{source}:{lineno}: bad span_types entry: {exc}") from None
        parsed["span_types"] = spans
    return rec["sentence_id"], parsed


def parse_external_predictions(text: str, source: str = "<memory>") -> ExternalPredictions:
    preds = ExternalPredictions(source=source)
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedJson(f"{source}:{lineno}: {exc}") from None
        sid, parsed = _parse_record(rec, lineno, source)
        for name, value in parsed.items():
            table = getattr(preds, name)
            if sid in table:
                raise DuplicatePrediction(f"{source}:{lineno}: second '{name}' for {sid!r}")
            table[sid] = value
    preds.scheme = infer_scheme(label for labels in preds.tags.values() for label in labels)
    return preds


def load_external_predictions(path, corpus: Corpus | None = None) -> ExternalPredictions:
    """Read a JSONL predictions file, validating it against ``corpus`` when given."""
    preds = parse_external_predictions(Path(path).read_text(encoding="utf-8"), str(path))
    if corpus is not None:
        preds.validate(corpus)
    return preds


class ExternalGate:
    def __init__(self, predictions: ExternalPredictions):
        self.predictions = predictions

    def predict_sentence(self, sentence: Sentence) -> int:
        try:
            return self.predictions.gate[sentence.id]
        except KeyError:
            raise MissingPrediction(f"no external gate decision for {sentence.id!r}") from None


class ExternalTagger:
    """Serves stored tags. With all-``O`` files the scheme is whatever is asked for."""

    def __init__(self, predictions: ExternalPredictions, scheme=None):
        self.predictions = predictions
        self.scheme_ = TagScheme.parse(scheme) if scheme else predictions.scheme

    def compatible_with(self, scheme: TagScheme) -> bool:
        return self.predictions.scheme in (None, scheme)

    def as_scheme(self, scheme: TagScheme) -> "ExternalTagger":
        return ExternalTagger(self.predictions, scheme)

    def tag_sentence(self, sentence: Sentence) -> TagSequence:
        try:
            labels = self.predictions.tags[sentence.id]
        except KeyError:
            raise MissingPrediction(f"no external tags for {sentence.id!r}") from None
        return TagSequence(self.scheme_ or TagScheme.FULL27, labels)


class ExternalTyper:
    def __init__(self, predictions: ExternalPredictions):
        self.predictions = predictions

    def predict_span(self, sentence: Sentence, span: Span) -> EntityType:
        try:
            return self.predictions.span_types[sentence.id][span.bounds]
        except KeyError:
            raise MissingPrediction(
                f"no external type for span {list(span.bounds)} of {sentence.id!r}"
            ) from None
