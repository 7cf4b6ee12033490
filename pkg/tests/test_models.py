import json
import random
import warnings

import numpy as np
import pytest

from cascade_ner.corpus import Corpus, Sentence, parse_conll
from cascade_ner.evaluation import evaluate
from cascade_ner.exceptions import (
    DuplicatePrediction,
    EmptyCorpus,
    InvalidHyperParameter,
    LengthMismatch,
    MalformedJson,
    MissingPrediction,
    NoSpansInCorpus,
    SingleClassCorpusWarning,
    UnknownLabel,
    UnknownSentenceId,
)
from cascade_ner.features import SpanQuery
from cascade_ner.labels import ENTITY_TYPES, TagScheme, entity_type
from cascade_ner.models import (
    ChainTagger,
    ExternalGate,
    ExternalTagger,
    ExternalTyper,
    SentenceGate,
    SpanTypeClassifier,
    dumps_model,
    load_external_predictions,
    model_from_dict,
    model_to_dict,
    parse_external_predictions,
    path_score,
    predict_gate,
    predict_span_type,
    train_gate,
    train_span_classifier,
    train_tagger,
    viterbi,
    viterbi_decode,
)
from cascade_ner.pipeline import SentencePrediction
from cascade_ner.spans import Span, decode_bio, erase_types
from oracles import brute_force_best_path


def _random_words(rng, k):
    return [rng.choice(["the", "data", "were", "analysed", "with", "and", "a", "new", "tool", "in", "we"])
            for _ in range(k)]


def gate_toy(n=40, seed=1):
    rng = random.Random(seed)
    rows = []
    for i in range(n):
        words = _random_words(rng, rng.randint(3, 7))
        if i % 2:
            pos = rng.randrange(len(words) + 1)
            words.insert(pos, "ToolX")
            tags = ["O"] * len(words)
            tags[pos] = "B-Application_Usage"
        else:
            tags = ["O"] * len(words)
        rows.append((words, tags))
    return Corpus.from_lists(rows)


def shape_toy(n=60, seed=2, etype="PlugIn_Usage"):
    """Entities are exactly the tokens shaped XxxX."""
    rng = random.Random(seed)
    rows = []
    for _ in range(n):
        words, tags = [], []
        for _ in range(rng.randint(3, 9)):
            if rng.random() < 0.25:
                words.append(rng.choice("ABCDEFGH") + "".join(rng.choice("aeioukrst") for _ in range(2))
                             + rng.choice("QRSTXZ"))
                tags.append(f"B-{etype}")
            else:
                words.append(rng.choice(["model", "Data", "we", "used", "The", "ran", "on", "and"]))
                tags.append("O")
        rows.append((words, tags))
    return Corpus.from_lists(rows)


def typer_toy():
    rows = []
    names = ["Alpha", "Beta", "Gamma", "Delta", "Omega", "Sigma"]
    for i, name in enumerate(names * 2):
        if i % 2:
            rows.append((["we", "developed", name, "today"], ["O", "O", "B-Application_Creation", "O"]))
        else:
            rows.append((["all", "work", "using", name], ["O", "O", "O", "B-Application_Usage"]))
    return Corpus.from_lists(rows)


class TestViterbi:
    def test_zero_model_picks_lowest_label(self):
        path, score = viterbi(np.zeros((3, 4)), np.zeros((4, 4)), np.zeros(4), np.zeros(4))
        assert path == [0, 0, 0]
        assert score == 0.0

    def test_single_token(self):
        em = np.array([[1.0, 2.0, 0.5]])
        start = np.array([0.0, -3.0, 0.0])
        stop = np.array([0.0, 0.0, 1.0])
        path, score = viterbi(em, np.zeros((3, 3)), start, stop)
        assert path == [2]
        assert score == pytest.approx(1.5)

    def test_matches_brute_force(self):
        rng = np.random.default_rng(0)
        for _ in range(300):
            n, n_labels = rng.integers(1, 7), rng.integers(1, 6)
            em = rng.normal(size=(n, n_labels))
            tr = rng.normal(size=(n_labels, n_labels))
            st, sp = rng.normal(size=n_labels), rng.normal(size=n_labels)
            path, score = viterbi(em, tr, st, sp)
            best = brute_force_best_path(em, tr, st, sp)
            assert score == pytest.approx(best, abs=1e-9)
            assert path_score(path, em, tr, st, sp) == pytest.approx(best, abs=1e-9)

    def test_integer_ties_still_optimal(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            n, n_labels = rng.integers(1, 6), rng.integers(1, 5)
            em = rng.integers(-1, 2, size=(n, n_labels)).astype(float)
            tr = rng.integers(-1, 2, size=(n_labels, n_labels)).astype(float)
            st, sp = np.zeros(n_labels), np.zeros(n_labels)
            _, score = viterbi(em, tr, st, sp)
            assert score == brute_force_best_path(em, tr, st, sp)


class TestGate:
    def test_separable_toy_converges(self):
        corpus = gate_toy()
        gate = train_gate(corpus, epochs=5, seed=42)
        gold = [1 if s.spans else 0 for s in corpus]
        assert [predict_gate(gate, s.sentence) for s in corpus] == gold

    def test_all_negative_warns_and_predicts_zero(self):
        corpus = parse_conll("a\tO\nb\tO\n\nc\tO\n\n")
        with pytest.warns(SingleClassCorpusWarning):
            gate = train_gate(corpus)
        assert list(gate.predict([["x", "y"], ["a", "b"]])) == [0, 0]

    def test_zero_epochs_rejected(self):
        with pytest.raises(InvalidHyperParameter):
            train_gate(gate_toy(), epochs=0)

    def test_empty(self):
        with pytest.raises(EmptyCorpus):
            train_gate(Corpus(()))

    def test_zero_weight_gate_predicts_zero(self):
        gate = train_gate(gate_toy(), epochs=1)
        gate.coef_[:] = 0
        assert gate.predict_sentence(Sentence.from_words(["ToolX"])) == 0

    def test_sklearn_params(self):
        gate = SentenceGate(epochs=3, random_state=7)
        assert gate.get_params() == {"epochs": 3, "learning_rate": 1.0, "random_state": 7}
        from sklearn.base import clone
        assert clone(gate).get_params() == gate.get_params()


class TestTagger:
    def test_shape_toy_held_in_f1(self):
        corpus = shape_toy()
        tagger = train_tagger(corpus, TagScheme.UNTYPED3, epochs=10)
        pairs = [(erase_types(s.spans), decode_bio(viterbi_decode(tagger, s.sentence))) for s in corpus]
        assert all(g == p for g, p in pairs)

    def test_full27_one_type_equivalent(self):
        corpus = shape_toy()
        untyped = train_tagger(corpus, TagScheme.UNTYPED3, epochs=10)
        typed = train_tagger(corpus, TagScheme.FULL27, epochs=10)
        for s in corpus:
            a = decode_bio(untyped.tag_sentence(s.sentence))
            b = erase_types(decode_bio(typed.tag_sentence(s.sentence)))
            assert a == b

    def test_no_entities_predicts_outside(self):
        corpus = parse_conll("a\tO\nb\tO\n\nc\tO\nd\tO\ne\tO\n\n")
        tagger = train_tagger(corpus)
        assert tagger.predict([["a", "b"], ["new", "words", "here"]]) == [["O", "O"], ["O", "O", "O"]]

    def test_label_counts(self):
        assert len(train_tagger(shape_toy(10), TagScheme.FULL27, epochs=1).labels_) == 27
        assert train_tagger(shape_toy(10), TagScheme.UNTYPED3, epochs=1).labels_ == ("O", "B", "I")

    def test_zero_model_tie_break(self):
        tagger = train_tagger(parse_conll("a\tO\n\n"), epochs=1)
        tagger.emission_[:] = 0
        tagger.transition_[:] = 0
        tagger.start_[:] = 0
        tagger.stop_[:] = 0
        assert viterbi_decode(tagger, Sentence.from_words(["x", "y", "z"])).labels == ("O", "O", "O")

    def test_tag_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            ChainTagger().fit([["a", "b"]], [["O"]])


class TestTyper:
    def test_context_keyword_toy(self):
        corpus = typer_toy()
        typer = train_span_classifier(corpus, epochs=10)
        for s in corpus:
            for span in s.spans:
                assert typer.predict_span(s.sentence, span.untyped()) == span.type

    def test_single_span_predicts_its_type(self):
        corpus = parse_conll("we\tO\nused\tO\nR\tB-ProgrammingEnvironment_Usage\n\n")
        with pytest.warns(SingleClassCorpusWarning):
            typer = train_span_classifier(corpus)
        q = SpanQuery.from_span(Sentence.from_words(["unrelated", "Thing"]), Span(1, 2))
        assert predict_span_type(typer, q) == entity_type("ProgrammingEnvironment_Usage")

    def test_no_spans(self):
        with pytest.raises(NoSpansInCorpus):
            train_span_classifier(parse_conll("a\tO\n\n"))

    def test_zero_weight_typer_predicts_first_type(self):
        typer = train_span_classifier(typer_toy(), epochs=1)
        typer.coef_[:] = 0
        q = SpanQuery.from_span(Sentence.from_words(["x"]), Span(0, 1))
        assert predict_span_type(typer, q) == ENTITY_TYPES[0] == entity_type("Application_Creation")


class TestPersistence:
    @pytest.mark.parametrize("make", [
        lambda: train_gate(gate_toy(), epochs=3),
        lambda: train_tagger(shape_toy(20), TagScheme.FULL27, epochs=3),
        lambda: train_span_classifier(typer_toy(), epochs=3),
    ])
    def test_round_trip(self, make):
        model = make()
        text = dumps_model(model)
        doc = json.loads(text)
        assert doc["format"] == "cascade-ner-model"
        assert doc["version"] == 1
        assert doc["kind"] in ("gate", "tagger", "typer")
        loaded = model_from_dict(doc)
        assert dumps_model(loaded) == text

    def test_tagger_predictions_survive_reload(self):
        corpus = shape_toy(30)
        model = train_tagger(corpus, epochs=3)
        loaded = model_from_dict(model_to_dict(model))
        for s in corpus:
            assert loaded.tag_sentence(s.sentence) == model.tag_sentence(s.sentence)

    def test_determinism(self):
        a = dumps_model(train_tagger(shape_toy(), epochs=4, seed=3))
        b = dumps_model(train_tagger(shape_toy(), epochs=4, seed=3))
        assert a == b

    def test_seed_recorded(self):
        assert json.loads(dumps_model(train_gate(gate_toy(), seed=9)))["meta"]["seed"] == 9

    def test_rejects_foreign_json(self):
        with pytest.raises(MalformedJson):
            model_from_dict({"format": "other"})


THREE = Corpus.from_lists([(["a", "b", "c"], ["O", "O", "O"])])


class TestExternal:
    def test_accepts_matching_tags(self):
        preds = parse_external_predictions('{"sentence_id": "s0", "tags": ["O", "B", "I"]}\n')
        preds.validate(THREE)
        assert preds.scheme is TagScheme.UNTYPED3
        assert ExternalTagger(preds).tag_sentence(THREE[0].sentence).labels == ("O", "B", "I")

    def test_length_mismatch(self):
        preds = parse_external_predictions('{"sentence_id": "s0", "tags": ["O", "B"]}')
        with pytest.raises(LengthMismatch):
            preds.validate(THREE)

    def test_unknown_id(self):
        preds = parse_external_predictions('{"sentence_id": "zz", "gate": 1}')
        with pytest.raises(UnknownSentenceId):
            preds.validate(THREE)

    @pytest.mark.parametrize("line,error", [
        ('{"sentence_id": "s0", "tags": ["O", "X", "O"]}', UnknownLabel),
        ('{"sentence_id": "s0", "tags": [', MalformedJson),
        ('{"sentence_id": "s0", "gate": 2}', MalformedJson),
        ('{"tags": ["O"]}', MalformedJson),
        ('{"sentence_id": "s0", "span_types": [{"start": 0, "end": 1, "type": "Nope_Usage"}]}', UnknownLabel),
    ])
    def test_bad_records(self, line, error):
        with pytest.raises(error):
            parse_external_predictions(line)

    def test_duplicate_field(self):
        with pytest.raises(DuplicatePrediction):
            parse_external_predictions('{"sentence_id": "s0", "gate": 1}\n{"sentence_id": "s0", "gate": 0}')

    def test_merged_records(self, tmp_path):
        path = tmp_path / "ext.jsonl"
        path.write_text(
            '{"sentence_id": "s0", "gate": 1}\n'
            '{"sentence_id": "s0", "span_types": [{"start": 1, "end": 3, "type": "PlugIn_Usage"}]}\n'
        )
        preds = load_external_predictions(path, THREE)
        s = THREE[0].sentence
        assert ExternalGate(preds).predict_sentence(s) == 1
        assert ExternalTyper(preds).predict_span(s, Span(1, 3)) == entity_type("PlugIn_Usage")
        with pytest.raises(MissingPrediction):
            ExternalTyper(preds).predict_span(s, Span(0, 1))
        with pytest.raises(MissingPrediction):
            ExternalTagger(preds).tag_sentence(s)
