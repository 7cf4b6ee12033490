"""BIO encoding/decoding and label-scheme transforms.

Spans are half-open token intervals ``[start, end)``. Decoding is total:
a stray ``I`` opens a new span, and in the typed scheme an ``I`` whose type
differs from the open span closes it and opens a new one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .exceptions import (
    LengthMismatch,
    MissingTypeForFullScheme,
    OverlappingSpans,
    SpanOutOfRange,
)
from .labels import EntityType, TagScheme, entity_type, parse_label


@dataclass(frozen=True)
class Span:
    start: int
    end: int
    type: EntityType | None = None

    def __post_init__(self):
        if not (0 <= self.start < self.end):
            raise SpanOutOfRange(f"invalid span [{self.start}, {self.end})")
        if self.type is not None and not isinstance(self.type, EntityType):
            object.__setattr__(self, "type", entity_type(self.type))

    @property
    def bounds(self) -> tuple[int, int]:
        return self.start, self.end

    def untyped(self) -> "Span":
        return self if self.type is None else Span(self.start, self.end)

    def __len__(self):
        return self.end - self.start

    def __repr__(self):
        if self.type is None:
            return f"Span({self.start}, {self.end})"
        return f"Span({self.start}, {self.end}, {self.type})"


@dataclass(frozen=True)
class TagSequence:
    scheme: TagScheme
    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "scheme", TagScheme.parse(self.scheme))
        object.__setattr__(self, "labels", tuple(self.labels))
        for label in self.labels:
            parse_label(label, self.scheme)

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    @classmethod
    def outside(cls, length: int, scheme=TagScheme.FULL27) -> "TagSequence":
        return cls(scheme, ("O",) * length)


def decode_bio(tags: TagSequence) -> list[Span]:
    """Decode a tag sequence into sorted, disjoint spans."""
    spans = []
    start = None
    current = None
    for i, label in enumerate(tags.labels):
        prefix, etype = parse_label(label, tags.scheme)
        if prefix == "I" and start is not None and etype == current:
            continue
        if start is not None:
            spans.append(Span(start, i, current))
            start = None
        if prefix != "O":
            start, current = i, etype
    if start is not None:
        spans.append(Span(start, len(tags), current))
    return spans


def encode_bio(spans: Iterable[Span], length: int, scheme=TagScheme.UNTYPED3) -> TagSequence:
    """Inverse of :func:`decode_bio`.

    Types are dropped under the untyped scheme; the typed scheme requires
    every span to carry one.
    """
    scheme = TagScheme.parse(scheme)
    labels = ["O"] * length
    for span in sorted(spans, key=lambda s: (s.start, s.end)):
        if span.end > length:
            raise SpanOutOfRange(f"{span!r} exceeds sentence length {length}")
        if any(labels[i] != "O" for i in range(span.start, span.end)):
            raise OverlappingSpans(f"{span!r} overlaps an earlier span")
        if scheme is TagScheme.FULL27:
            if span.type is None:
                raise MissingTypeForFullScheme(f"{span!r} has no entity type")
            suffix = f"-{span.type}"
        else:
            suffix = ""
        labels[span.start] = "B" + suffix
        for i in range(span.start + 1, span.end):
            labels[i] = "I" + suffix
    return TagSequence(scheme, tuple(labels))


def collapse_scheme(tags: TagSequence) -> TagSequence:
    """Map typed ``B-X``/``I-X`` labels to bare ``B``/``I``.

    An ``I-Y`` directly after a span of another type becomes ``B`` so that the
    collapsed sequence decodes to the same boundaries as the typed one.
    """
    if tags.scheme is TagScheme.UNTYPED3:
        return tags
    out = []
    prev = None
    for label in tags.labels:
        prefix, etype = parse_label(label, tags.scheme)
        if prefix == "I" and prev is not None and prev != etype:
            prefix = "B"
        out.append(prefix)
        prev = etype
    return TagSequence(TagScheme.UNTYPED3, tuple(out))


def erase_types(spans: Iterable[Span]) -> list[Span]:
    return [s.untyped() for s in spans]


def apply_types(spans: Sequence[Span], types: Sequence[EntityType | str]) -> list[Span]:
    if len(spans) != len(types):
        raise LengthMismatch(f"{len(spans)} spans but {len(types)} types")
    return [Span(s.start, s.end, entity_type(t)) for s, t in zip(spans, types)]


def sentence_entity_label(tags: TagSequence) -> int:
    return 1 if decode_bio(tags) else 0
