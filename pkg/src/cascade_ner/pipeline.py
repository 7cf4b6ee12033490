"""The three recognition approaches composed from gate, tagger and typer.

Components are duck-typed:

* gate:   ``predict_sentence(sentence) -> 0 | 1``
* tagger: ``tag_sentence(sentence) -> TagSequence`` and a ``scheme_`` attribute
* typer:  ``predict_span(sentence, span) -> EntityType``

Native models and the external-prediction adapters both satisfy them.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from sklearn.base import BaseEstimator

from .corpus import Corpus, LabeledSentence, Sentence
from .exceptions import ConfigError, MalformedJson, MissingComponent, SchemeMismatch
from .features import CONTEXT_WINDOW
from .labels import EntityType, TagScheme
from .models.perceptron import SentenceGate, SpanTypeClassifier, span_training_data
from .models.tagger import ChainTagger
from .spans import Span, apply_types, decode_bio, erase_types, sentence_entity_label
from .validation import check_sentences, check_tags

THREADS_ENV = "CASCADE_NER_THREADS"
TRAIN_SUBSETS = ("gated", "all")


@dataclass
class StageTrace:
    gate: int | None = None
    untyped: list[Span] | None = None
    types: list[EntityType] | None = None
    tagger_called: bool = False
    typer_calls: int = 0

    def to_dict(self) -> dict:
        out = {}
        if self.gate is not None:
            out["gate"] = self.gate
        if self.untyped is not None:
            out["untyped"] = [[s.start, s.end] for s in self.untyped]
        if self.types is not None:
            out["types"] = [str(t) for t in self.types]
        return out


@dataclass
class SentencePrediction:
    sentence_id: str
    spans: list[Span]
    trace: StageTrace = field(default_factory=StageTrace)

    def to_dict(self, trace: bool = False) -> dict:
        out = {
            "sentence_id": self.sentence_id,
            "spans": [{"start": s.start, "end": s.end, "type": str(s.type)} for s in self.spans],
        }
        if trace:
            out["trace"] = self.trace.to_dict()
        return out


def _tagger_scheme(tagger):
    return getattr(tagger, "scheme_", None)


def _require_scheme(tagger, scheme: TagScheme):
    """Return ``tagger`` checked (or coerced, for scheme-less adapters) to ``scheme``."""
    current = _tagger_scheme(tagger)
    if current is None and hasattr(tagger, "as_scheme"):
        return tagger.as_scheme(scheme)
    if current is not scheme:
        name = current.value if current is not None else "unknown"
        raise SchemeMismatch(f"tagger uses scheme {name}, this approach needs {scheme.value}")
    return tagger


@dataclass
class PipelineSpec:
    approach: int
    tagger: object = None
    typer: object = None
    gate: object = None

    def __post_init__(self):
        if self.approach not in (1, 2, 3):
            raise ConfigError(f"approach must be 1, 2 or 3, got {self.approach!r}")
        if self.tagger is None:
            raise MissingComponent("every approach needs a tagger")
        if self.approach == 1:
            self.tagger = _require_scheme(self.tagger, TagScheme.FULL27)
            return
        self.tagger = _require_scheme(self.tagger, TagScheme.UNTYPED3)
        if self.typer is None:
            raise MissingComponent(f"approach {self.approach} needs a typer")
        if self.approach == 3 and self.gate is None:
            raise MissingComponent("approach 3 needs a gate")

    def run(self, sentence: Sentence) -> SentencePrediction:
        if self.approach == 1:
            return run_approach1(self.tagger, sentence)
        if self.approach == 2:
            return run_approach2(self.tagger, self.typer, sentence)
        return run_approach3(self.gate, self.tagger, self.typer, sentence)


def run_approach1(tagger, sentence: Sentence) -> SentencePrediction:
    if _tagger_scheme(tagger) is not TagScheme.FULL27:
        tagger = _require_scheme(tagger, TagScheme.FULL27)
    spans = decode_bio(tagger.tag_sentence(sentence))
    trace = StageTrace(untyped=erase_types(spans), types=[s.type for s in spans], tagger_called=True)
    return SentencePrediction(sentence.id, spans, trace)


def _extract_and_type(tagger, typer, sentence, trace):
    untyped = decode_bio(tagger.tag_sentence(sentence))
    trace.tagger_called = True
    trace.untyped = untyped
    types = []
    for span in untyped:
        types.append(typer.predict_span(sentence, span))
        trace.typer_calls += 1
    trace.types = types
    return apply_types(untyped, types)


def run_approach2(tagger, typer, sentence: Sentence) -> SentencePrediction:
    if _tagger_scheme(tagger) is not TagScheme.UNTYPED3:
        tagger = _require_scheme(tagger, TagScheme.UNTYPED3)
    trace = StageTrace()
    spans = _extract_and_type(tagger, typer, sentence, trace)
    return SentencePrediction(sentence.id, spans, trace)


def run_approach3(gate, tagger, typer, sentence: Sentence) -> SentencePrediction:
    if _tagger_scheme(tagger) is not TagScheme.UNTYPED3:
        tagger = _require_scheme(tagger, TagScheme.UNTYPED3)
    decision = int(gate.predict_sentence(sentence))
    trace = StageTrace(gate=decision)
    if decision == 0:
        return SentencePrediction(sentence.id, [], trace)
    spans = _extract_and_type(tagger, typer, sentence, trace)
    return SentencePrediction(sentence.id, spans, trace)


def resolve_threads(threads=None) -> int:
    if threads is None:
        raw = os.environ.get(THREADS_ENV, "1")
        try:
            threads = int(raw)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if threads < 0:
        raise ConfigError("thread count must be >= 0")
    return threads or (os.cpu_count() or 1)


def predict_corpus(spec: PipelineSpec, corpus, threads=None) -> list[SentencePrediction]:
    """Run ``spec`` over every sentence; output order follows the input."""
    sentences = [s.sentence if isinstance(s, LabeledSentence) else s for s in corpus]
    n = resolve_threads(threads)
    if n == 1 or len(sentences) < 2:
        return [spec.run(s) for s in sentences]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(spec.run, sentences))


def parse_predictions(text: str, source: str = "<memory>") -> list[SentencePrediction]:
    """Read prediction JSONL as written by :func:`dumps_predictions` (traces are ignored)."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            spans = [Span(int(d["start"]), int(d["end"]), d["type"]) for d in rec["spans"]]
            sid = rec["sentence_id"]
        except json.JSONDecodeError as exc:
            raise MalformedJson(f"{source}:{lineno}: {exc}") from None
        except (KeyError, TypeError, AttributeError) as exc:
            raise MalformedJson(f"{source}:{lineno}: bad prediction record: {exc}") from None
        if not isinstance(sid, str):
            raise MalformedJson(f"{source}:{lineno}: 'sentence_id' must be a string")
        out.append(SentencePrediction(sid, sorted(spans, key=lambda s: (s.start, s.end))))
    return out


def dumps_predictions(predictions, trace: bool = False) -> str:
    return "".join(
        json.dumps(p.to_dict(trace), ensure_ascii=False, separators=(",", ":")) + "\n"
        for p in predictions
    )


class CascadeRecognizer(BaseEstimator):
    """End-to-end recognizer for one of the three approaches.

    ``fit(X, y)`` takes sentences (or token lists) with typed BIO label
    lists and trains the components the approach needs; ``predict`` returns
    the typed spans of each sentence.

    Parameters
    ----------
    approach : {1, 2, 3}
        1 = flat 27-label tagger; 2 = untyped extraction then span typing;
        3 = sentence gate in front of approach 2.
    train_subset : {"gated", "all"}
        Approach 3 only: train the extractor on entity-bearing sentences
        (``"gated"``) or on everything.
    """

    def __init__(self, approach=3, epochs=10, learning_rate=1.0, random_state=42,
                 train_subset="gated", window=CONTEXT_WINDOW):
        self.approach = approach
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.random_state = random_state
        self.train_subset = train_subset
        self.window = window

    def fit(self, X, y):
        if self.train_subset not in TRAIN_SUBSETS:
            raise ConfigError(f"train_subset must be one of {TRAIN_SUBSETS}")
        sentences = check_sentences(X)
        tags = check_tags(y, sentences, TagScheme.FULL27)
        hyper = dict(epochs=self.epochs, learning_rate=self.learning_rate,
                     random_state=self.random_state)
        self.gate_ = self.typer_ = None
        if self.approach == 1:
            self.tagger_ = ChainTagger(scheme="full27", **hyper).fit(sentences, tags)
        else:
            keep = [True] * len(sentences)
            if self.approach == 3:
                labels = [sentence_entity_label(t) for t in tags]
                self.gate_ = SentenceGate(**hyper).fit(sentences, labels)
                if self.train_subset == "gated" and any(labels):
                    keep = [bool(v) for v in labels]
            self.tagger_ = ChainTagger(scheme="untyped3", **hyper).fit(
                [s for s, k in zip(sentences, keep) if k], [t for t, k in zip(tags, keep) if k]
            )
            corpus = Corpus(tuple(LabeledSentence(s, t) for s, t in zip(sentences, tags)))
            queries, types = span_training_data(corpus, self.window)
            self.typer_ = SpanTypeClassifier(window=self.window, **hyper).fit(queries, types)
        self.spec_ = PipelineSpec(self.approach, self.tagger_, self.typer_, self.gate_)
        return self

    def predict_sentences(self, X) -> list[SentencePrediction]:
        return predict_corpus(self.spec_, check_sentences(X))

    def predict(self, X) -> list[list[Span]]:
        return [p.spans for p in self.predict_sentences(X)]

    def score(self, X, y) -> float:
        """Support-weighted exact-match F1."""
        from .evaluation import evaluate

        sentences = check_sentences(X)
        tags = check_tags(y, sentences, TagScheme.FULL27)
        gold = Corpus(tuple(LabeledSentence(s, t) for s, t in zip(sentences, tags)))
        return evaluate(gold, self.predict_sentences(sentences)).weighted.f1
