"""``cascade-ner`` command line.

Exit codes: 0 success, 2 data error, 3 usage/configuration error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .corpus import corpus_stats, read_conll
from .evaluation import (
    compare_approaches,
    comparison_to_dict,
    diagnose_stage1,
    diagnose_stage2,
    diagnose_stage3,
    evaluate,
    render_comparison_table,
    render_report_table,
)
from .exceptions import ConfigError, DataError, MissingComponent
from .labels import ENTITY_TYPES, EntityGroup, TagScheme
from .models import (
    ExternalGate,
    ExternalTagger,
    ExternalTyper,
    dumps_model,
    load_external_predictions,
    load_model,
    train_gate,
    train_span_classifier,
    train_tagger,
)
from .models.persistence import VERSION as MODEL_FORMAT_VERSION
from .pipeline import PipelineSpec, dumps_predictions, parse_predictions, predict_corpus

EXIT_DATA = 2
EXIT_USAGE = 3
DEFAULT_SEED = 42


class UsageError(ConfigError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write_manifest(args, inputs, output):
    target = args.manifest or (f"{output}.manifest.json" if output else None)
    if not target:
        return
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "manifest")}
    manifest = {
        "tool": "cascade-ner",
        "version": __version__,
        "model_format_version": MODEL_FORMAT_VERSION,
        "command": args.command,
        "flags": flags,
        "seed": getattr(args, "seed", DEFAULT_SEED),
        "inputs": {str(p): _sha256(p) for p in inputs if p},
        "output": {str(output): _sha256(output)} if output else {},
    }
    Path(target).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _emit(text: str, path=None):
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _render_stats(report) -> str:
    lines = [
        f"{'Information':<24}Value",
        f"{'#Sentence':<24}{report.sentence_count}",
        f"{'#Sentence with entity':<24}{report.sentences_with_entity}",
        f"{'Total entity':<24}{report.total_entities}",
        f"{'Max length':<24}{report.max_length}",
        f"{'Avg length':<24}{report.avg_length}",
        "",
        f"{'Entity group':<24}{'Entity':<34}{'Quantity':>8}{'Total':>8}",
    ]
    for group in EntityGroup:
        members = [t for t in ENTITY_TYPES if t.group is group]
        for i, t in enumerate(members):
            total = str(report.per_group_totals[group]) if i == 0 else ""
            label = group.value if i == 0 else ""
            lines.append(f"{label:<24}{str(t):<34}{report.per_type_counts[t]:>8}{total:>8}")
    return "\n".join(lines) + "\n"


def cmd_stats(args):
    report = corpus_stats(read_conll(args.input))
    if args.format == "table":
        text = _render_stats(report)
    else:
        text = json.dumps(report.to_dict(), indent=2) + "\n"
    _emit(text, args.out)
    _write_manifest(args, [args.input], args.out)


def cmd_train(args):
    task = args.task
    if task == "flat":
        if args.scheme not in (None, "full27"):
            raise UsageError("'flat' always trains the full27 scheme")
        if args.train_subset is not None:
            raise UsageError("--train-subset applies to the 'tagger' task only")
    elif task == "tagger":
        pass
    elif args.scheme is not None or args.train_subset is not None:
        raise UsageError(f"--scheme/--train-subset do not apply to the '{task}' task")

    corpus = read_conll(args.input)
    hyper = dict(epochs=args.epochs, seed=args.seed, learning_rate=args.learning_rate)
    print(f"seed={args.seed}", file=sys.stderr)
    if task == "gate":
        model = train_gate(corpus, **hyper)
    elif task == "typer":
        model = train_span_classifier(corpus, **hyper)
    else:
        scheme = TagScheme.FULL27 if task == "flat" else TagScheme.parse(args.scheme or "untyped3")
        subset = args.train_subset or ("gated" if task == "tagger" else "all")
        train_corpus = corpus
        if subset == "gated":
            train_corpus = corpus.subset(lambda s: bool(s.spans))
            if not len(train_corpus):
                train_corpus = corpus
        model = train_tagger(train_corpus, scheme, **hyper)
        model.meta_["train_subset"] = subset
    _emit(dumps_model(model), args.out)
    _write_manifest(args, [args.input], args.out)


def _load_component(path, kind):
    model = load_model(path)
    if model.kind != kind:
        raise UsageError(f"{path} holds a {model.kind} model, expected a {kind}")
    return model


def _build_spec(approach, tagger=None, typer=None, gate=None, external=None, corpus=None):
    components = {
        "tagger": _load_component(tagger, "tagger") if tagger else None,
        "typer": _load_component(typer, "typer") if typer else None,
        "gate": _load_component(gate, "gate") if gate else None,
    }
    if external:
        preds = load_external_predictions(external, corpus)
        if components["tagger"] is None and preds.tags:
            components["tagger"] = ExternalTagger(preds)
        if components["typer"] is None and preds.span_types:
            components["typer"] = ExternalTyper(preds)
        if components["gate"] is None and preds.gate:
            components["gate"] = ExternalGate(preds)
    return PipelineSpec(approach, **components)


def cmd_predict(args):
    corpus = read_conll(args.input)
    spec = _build_spec(args.approach, args.tagger, args.typer, args.gate, args.external, corpus)
    predictions = predict_corpus(spec, corpus)
    _emit(dumps_predictions(predictions, trace=args.trace), args.out)
    _write_manifest(args, [args.input, args.tagger, args.typer, args.gate, args.external], args.out)


def _emit_report(report, args, inputs):
    if args.format == "table":
        text = render_report_table(report)
    else:
        text = json.dumps(report.to_dict(args.digits), indent=2) + "\n"
    _emit(text, args.report)
    _write_manifest(args, inputs, args.report)


def cmd_evaluate(args):
    gold = read_conll(args.gold)
    preds = parse_predictions(Path(args.pred).read_text(encoding="utf-8"), args.pred)
    _emit_report(evaluate(gold, preds), args, [args.gold, args.pred])


def cmd_diagnose(args):
    gold = read_conll(args.gold)
    if bool(args.model) == bool(args.external):
        raise UsageError("give exactly one of --model or --external")
    kind = {1: "gate", 2: "tagger", 3: "typer"}[args.stage]
    if args.model:
        component = _load_component(args.model, kind)
    else:
        preds = load_external_predictions(args.external, gold)
        component = {1: ExternalGate, 2: ExternalTagger, 3: ExternalTyper}[args.stage](preds)
    diagnose = {1: diagnose_stage1, 2: diagnose_stage2, 3: diagnose_stage3}[args.stage]
    _emit_report(diagnose(component, gold), args, [args.gold, args.model or args.external])


def _load_compare_config(path, gold):
    try:
        config = json.loads(Path(path).read_text(encoding="utf-8"))
        systems = config["systems"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"{path}: invalid compare config: {exc}") from None
    base = Path(path).parent
    specs, inputs = [], []
    for i, entry in enumerate(systems):
        if not isinstance(entry, dict) or "approach" not in entry:
            raise UsageError(f"{path}: system {i} needs an 'approach'")
        paths = {k: str(base / entry[k]) for k in ("tagger", "typer", "gate", "external") if entry.get(k)}
        inputs += paths.values()
        try:
            spec = _build_spec(entry["approach"], corpus=gold, **paths)
        except MissingComponent as exc:
            raise UsageError(f"{path}: system {i}: {exc}") from None
        specs.append((str(entry.get("name", f"system{i}")), spec))
    return specs, inputs


def cmd_compare(args):
    gold = read_conll(args.gold)
    specs, inputs = _load_compare_config(args.config, gold)
    rows = compare_approaches(specs, gold)
    if args.format == "table":
        text = render_comparison_table(rows)
    else:
        text = json.dumps(comparison_to_dict(rows, args.digits), indent=2) + "\n"
    _emit(text, args.report)
    _write_manifest(args, [args.config, args.gold, *inputs], args.report)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cascade-ner", description="Software-mention recognition pipelines and evaluation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, fmt=True):
        p.add_argument("--manifest", help="manifest path (default: <output>.manifest.json)")
        if fmt:
            p.add_argument("--format", choices=("json", "table"), default="json")
            p.add_argument("--digits", type=int, default=3, help="rounding of reported metrics")

    p = sub.add_parser("stats", help="corpus statistics (sentence and entity counts)")
    p.add_argument("input")
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("train", help="train a gate, tagger, typer or flat 27-label tagger")
    p.add_argument("task", choices=("gate", "tagger", "typer", "flat"))
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--scheme", choices=("full27", "untyped3"))
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--learning-rate", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--train-subset", choices=("gated", "all"))
    common(p, fmt=False)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="run approach 1, 2 or 3 over a CoNLL file")
    p.add_argument("input")
    p.add_argument("--approach", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--tagger")
    p.add_argument("--typer")
    p.add_argument("--gate")
    p.add_argument("--external", help="JSONL predictions standing in for missing components")
    p.add_argument("--out")
    p.add_argument("--trace", action="store_true", help="include per-stage traces")
    common(p, fmt=False)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="exact-match span evaluation")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--report")
    common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("diagnose", help="evaluate one stage assuming perfect upstream stages")
    p.add_argument("--stage", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--model")
    p.add_argument("--external")
    p.add_argument("--report")
    common(p)
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("compare", help="grid of weighted P/R/F1 over named pipelines")
    p.add_argument("--config", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--report")
    common(p)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ConfigError as exc:
        print(f"cascade-ner: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError, UnicodeDecodeError) as exc:
        print(f"cascade-ner: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
