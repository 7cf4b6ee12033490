"""Exact-match span evaluation and stage-isolated diagnostics.

A predicted span is correct only when start, end and type all equal a gold
span. Per-class precision/recall/F1 use 0 for every 0/0; the weighted
average uses gold support as weights over classes with support > 0.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Sequence

from .corpus import Corpus
from .exceptions import (
    DuplicatePrediction,
    MissingPrediction,
    NoSpansInCorpus,
    UnknownSentenceId,
)
from .labels import ENTITY_TYPES
from .pipeline import PipelineSpec, SentencePrediction, predict_corpus
from .spans import Span, decode_bio, erase_types, sentence_entity_label

UNTYPED_LABEL = "ENTITY"
TYPE_LABELS = tuple(str(t) for t in ENTITY_TYPES)
GATE_LABELS = ("0", "1")


def _ratio(num, den) -> float:
    return num / den if den else 0.0


def _f1(p, r) -> float:
    return 2 * p * r / (p + r) if p + r else 0.0


def round_half_up(value: float, digits: int = 3) -> float:
    q = Decimal(1).scaleb(-digits)
    return float(Decimal(repr(value)).quantize(q, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class ClassMetrics:
    label: str
    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision(self) -> float:
        return _ratio(self.tp, self.tp + self.fp)

    @property
    def recall(self) -> float:
        return _ratio(self.tp, self.tp + self.fn)

    @property
    def f1(self) -> float:
        return _f1(self.precision, self.recall)

    @property
    def support(self) -> int:
        return self.tp + self.fn

    def to_dict(self, digits=3) -> dict:
        fmt = (lambda v: round_half_up(v, digits)) if digits is not None else float
        return {
            "type": self.label,
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "precision": fmt(self.precision),
            "recall": fmt(self.recall),
            "f1": fmt(self.f1),
            "support": self.support,
        }


@dataclass(frozen=True)
class Aggregate:
    precision: float
    recall: float
    f1: float

    def to_dict(self, digits=3) -> dict:
        if digits is None:
            return {"precision": self.precision, "recall": self.recall, "f1": self.f1}
        return {k: round_half_up(v, digits) for k, v in
                (("precision", self.precision), ("recall", self.recall), ("f1", self.f1))}


@dataclass(frozen=True)
class EvalReport:
    per_class: tuple[ClassMetrics, ...]
    totals: dict = field(default_factory=dict)

    def __getitem__(self, label) -> ClassMetrics:
        label = str(label)
        for m in self.per_class:
            if m.label == label:
                return m
        raise KeyError(label)

    @property
    def supported(self) -> list[ClassMetrics]:
        return [m for m in self.per_class if m.support > 0]

    @property
    def weighted(self) -> Aggregate:
        classes = self.supported
        total = sum(m.support for m in classes)
        if not total:
            return Aggregate(0.0, 0.0, 0.0)
        return Aggregate(*(
            sum(m.support * getattr(m, name) for m in classes) / total
            for name in ("precision", "recall", "f1")
        ))

    @property
    def macro(self) -> Aggregate:
        classes = self.supported
        if not classes:
            return Aggregate(0.0, 0.0, 0.0)
        return Aggregate(*(
            sum(getattr(m, name) for m in classes) / len(classes)
            for name in ("precision", "recall", "f1")
        ))

    @property
    def micro(self) -> Aggregate:
        tp = sum(m.tp for m in self.per_class)
        p = _ratio(tp, tp + sum(m.fp for m in self.per_class))
        r = _ratio(tp, tp + sum(m.fn for m in self.per_class))
        return Aggregate(p, r, _f1(p, r))

    def to_dict(self, digits=3) -> dict:
        return {
            "per_class": [m.to_dict(digits) for m in self.per_class],
            "weighted": self.weighted.to_dict(digits),
            "micro": self.micro.to_dict(digits),
            "macro": self.macro.to_dict(digits),
            "totals": dict(self.totals),
        }


def build_report(tp: Counter, fp: Counter, fn: Counter, labels: Sequence[str] = ()) -> EvalReport:
    """Assemble a report; ``labels`` fixes the row order, unseen extras follow sorted."""
    seen = set(tp) | set(fp) | set(fn)
    order = list(labels) + sorted(seen - set(labels))
    rows = tuple(ClassMetrics(label, tp[label], fp[label], fn[label]) for label in order)
    gold = sum(m.support for m in rows)
    matched = sum(m.tp for m in rows)
    predicted = matched + sum(m.fp for m in rows)
    return EvalReport(rows, {"gold": gold, "predicted": predicted, "matched": matched})


def _span_key(span: Span):
    return span.start, span.end, span.type


def span_label(span: Span) -> str:
    return UNTYPED_LABEL if span.type is None else str(span.type)


def match_exact(gold: Sequence[Span], pred: Sequence[Span]) -> list[tuple[int, int]]:
    """Pairs ``(gold index, pred index)`` whose bounds and types coincide."""
    lookup = {}
    for j, span in enumerate(pred):
        lookup.setdefault(_span_key(span), j)
    pairs = []
    used = set()
    for i, span in enumerate(gold):
        j = lookup.get(_span_key(span))
        if j is not None and j not in used:
            used.add(j)
            pairs.append((i, j))
    return pairs


def tally_spans(pairs: Iterable[tuple[Sequence[Span], Sequence[Span]]]):
    tp, fp, fn = Counter(), Counter(), Counter()
    for gold, pred in pairs:
        matched = match_exact(gold, pred)
        hit_gold = {i for i, _ in matched}
        hit_pred = {j for _, j in matched}
        for i, span in enumerate(gold):
            (tp if i in hit_gold else fn)[span_label(span)] += 1
        for j, span in enumerate(pred):
            if j not in hit_pred:
                fp[span_label(span)] += 1
    return tp, fp, fn


def _align(gold: Corpus, preds: Iterable[SentencePrediction]) -> dict[str, SentencePrediction]:
    ids = {s.id for s in gold}
    by_id = {}
    for p in preds:
        if p.sentence_id not in ids:
            raise UnknownSentenceId(f"prediction for unknown sentence id {p.sentence_id!r}")
        if p.sentence_id in by_id:
            raise DuplicatePrediction(f"more than one prediction for {p.sentence_id!r}")
        by_id[p.sentence_id] = p
    for s in gold:
        if s.id not in by_id:
            raise MissingPrediction(f"no prediction for sentence {s.id!r}")
    return by_id


def evaluate(gold: Corpus, preds: Iterable[SentencePrediction]) -> EvalReport:
    by_id = _align(gold, preds)
    tp, fp, fn = tally_spans((s.spans, by_id[s.id].spans) for s in gold)
    return build_report(tp, fp, fn, TYPE_LABELS)


def classification_report(gold_labels, pred_labels, labels: Sequence[str] = ()) -> EvalReport:
    """Single-label classification counts in the same report shape."""
    tp, fp, fn = Counter(), Counter(), Counter()
    for g, p in zip(gold_labels, pred_labels, strict=True):
        g, p = str(g), str(p)
        if g == p:
            tp[g] += 1
        else:
            fn[g] += 1
            fp[p] += 1
    return build_report(tp, fp, fn, labels)


def diagnose_stage1(gate, corpus: Corpus) -> EvalReport:
    """Sentence gate against gold has-entity labels; classes 0 and 1."""
    gold = [sentence_entity_label(s.tags) for s in corpus]
    pred = [int(gate.predict_sentence(s.sentence)) for s in corpus]
    return classification_report(gold, pred, GATE_LABELS)


def diagnose_stage2(tagger, corpus: Corpus) -> EvalReport:
    """Boundary-only extraction on gold entity-bearing sentences (perfect gate assumed)."""
    pairs = []
    for s in corpus:
        gold = erase_types(s.spans)
        if not gold:
            continue
        pred = erase_types(decode_bio(tagger.tag_sentence(s.sentence)))
        pairs.append((gold, pred))
    tp, fp, fn = tally_spans(pairs)
    return build_report(tp, fp, fn, (UNTYPED_LABEL,))


def diagnose_stage3(typer, corpus: Corpus) -> EvalReport:
    """Typing of gold spans (perfect extraction assumed)."""
    gold, pred = [], []
    for s in corpus:
        for span in s.spans:
            gold.append(span.type)
            pred.append(typer.predict_span(s.sentence, span.untyped()))
    if not gold:
        raise NoSpansInCorpus("stage-3 diagnostics need at least one gold span")
    return classification_report(gold, pred, TYPE_LABELS)


@dataclass(frozen=True)
class ComparisonRow:
    name: str
    approach: int
    report: EvalReport


def compare_approaches(specs, gold: Corpus, threads=None) -> list[ComparisonRow]:
    """Evaluate named pipeline specs; ``specs`` is a list of ``(name, PipelineSpec)``."""
    rows = []
    for name, spec in specs:
        if not isinstance(spec, PipelineSpec):
            raise TypeError(f"{name}: expected a PipelineSpec")
        report = evaluate(gold, predict_corpus(spec, gold, threads))
        rows.append(ComparisonRow(name, spec.approach, report))
    return rows


def _fmt(v):
    return f"{round_half_up(v):.3f}"


def render_report_table(report: EvalReport, title: str = "Entity class") -> str:
    width = max([len(title), len("weighted avg")] + [len(m.label) for m in report.per_class])
    lines = [f"{title:<{width}}  Precision  Recall  F1-score  Support"]
    for m in report.per_class:
        lines.append(
            f"{m.label:<{width}}  {_fmt(m.precision):>9}  {_fmt(m.recall):>6}  {_fmt(m.f1):>8}  {m.support:>7}"
        )
    lines.append("-" * len(lines[0]))
    total = report.totals.get("gold", 0)
    for name, agg in (("weighted avg", report.weighted), ("micro avg", report.micro),
                      ("macro avg", report.macro)):
        lines.append(
            f"{name:<{width}}  {_fmt(agg.precision):>9}  {_fmt(agg.recall):>6}  {_fmt(agg.f1):>8}  {total:>7}"
        )
    return "\n".join(lines) + "\n"


def render_comparison_table(rows: Sequence[ComparisonRow]) -> str:
    """Grid of weighted P/R/F1: one line per component set, one column group per approach."""
    approaches = sorted({r.approach for r in rows})
    names = list(dict.fromkeys(r.name for r in rows))
    cell = {(r.name, r.approach): r.report.weighted for r in rows}
    width = max([len("Models")] + [len(n) for n in names])
    head1 = f"{'':<{width}}" + "".join(f" | {'Approach ' + str(a):^20}" for a in approaches)
    head2 = f"{'Models':<{width}}" + "".join(" |  P      R      F1  " for _ in approaches)
    lines = [head1, head2]
    for n in names:
        parts = []
        for a in approaches:
            agg = cell.get((n, a))
            parts.append(
                f" | {_fmt(agg.precision)}  {_fmt(agg.recall)}  {_fmt(agg.f1)}" if agg
                else f" | {'-':^20}"
            )
        lines.append(f"{n:<{width}}" + "".join(parts))
    return "\n".join(lines) + "\n"


def comparison_to_dict(rows: Sequence[ComparisonRow], digits=3) -> dict:
    return {"rows": [
        {"name": r.name, "approach": r.approach,
         "weighted": r.report.weighted.to_dict(digits), "micro": r.report.micro.to_dict(digits),
         "totals": dict(r.report.totals)}
        for r in rows
    ]}

