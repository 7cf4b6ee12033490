from decimal import Decimal

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cascade_ner.corpus import (
    Corpus,
    LabeledSentence,
    Sentence,
    Token,
    corpus_stats,
    entity_distribution,
    parse_conll,
    serialize_conll,
)
from cascade_ner.exceptions import (
    EmptyCorpus,
    InvalidCorpus,
    InvalidToken,
    LengthMismatch,
    MalformedLine,
    UnknownLabel,
)
from cascade_ner.labels import FULL27_LABELS, EntityGroup, TagScheme, entity_type
from cascade_ner.spans import TagSequence, decode_bio

ONE = "We\tO\nused\tO\nSPSS\tB-Application_Usage\n\n"


def test_parse_single_sentence():
    corpus = parse_conll(ONE)
    assert len(corpus) == 1
    s = corpus[0]
    assert s.id == "s0"
    assert s.sentence.words == ("We", "used", "SPSS")
    assert len(s.spans) == 1


def test_round_trip_bytes():
    assert serialize_conll(parse_conll(ONE)) == ONE


def test_eof_without_blank_line():
    assert serialize_conll(parse_conll(ONE[:-1])) == ONE


def test_sentence_ids_are_positional_unless_given():
    text = ONE + "# sent_id = doc7-3\nok\tO\n\n" + ONE
    corpus = parse_conll(text)
    assert [s.id for s in corpus] == ["s0", "doc7-3", "s2"]
    assert serialize_conll(corpus) == text


@pytest.mark.parametrize("text,error", [
    ("", EmptyCorpus),
    ("X\tB-Foo_Bar\n\n", UnknownLabel),
    ("X\tO\textra\n\n", MalformedLine),
    ("no-tab-here\n\n", MalformedLine),
    ("a\tO\n\n\nb\tO\n\n", MalformedLine),
    ("\tO\n\n", MalformedLine),
    ("a\tB\n\n", UnknownLabel),
])
def test_parse_errors(text, error):
    with pytest.raises(error):
        parse_conll(text)


def test_malformed_line_reports_line_number():
    with pytest.raises(MalformedLine, match="line 3"):
        parse_conll("a\tO\n\nbad line\n")


def test_case_preserved():
    corpus = parse_conll("SPSS\tO\nspss\tO\n\n")
    assert corpus[0].sentence.words == ("SPSS", "spss")


def test_serialize_empty_corpus():
    with pytest.raises(InvalidCorpus):
        serialize_conll(Corpus(()))


def test_tab_in_token_rejected_at_construction():
    with pytest.raises(InvalidToken):
        Token("a\tb", 0)
    with pytest.raises(InvalidToken):
        Sentence.from_words(["ok", "new\nline"])


def test_sentence_invariants():
    with pytest.raises(InvalidCorpus):
        Sentence("s0", ())
    with pytest.raises(InvalidCorpus):
        Sentence("s0", (Token("a", 1),))
    with pytest.raises(LengthMismatch):
        LabeledSentence(Sentence.from_words(["a"]), TagSequence(TagScheme.FULL27, ("O", "O")))


def test_duplicate_ids_rejected():
    s = parse_conll(ONE)[0]
    with pytest.raises(InvalidCorpus):
        Corpus((s, s))


def test_stats_all_outside_sentence():
    report = corpus_stats(parse_conll("a\tO\nb\tO\nc\tO\nd\tO\n\n"))
    assert (report.sentence_count, report.sentences_with_entity, report.total_entities,
            report.max_length, report.avg_length) == (1, 0, 0, 4, Decimal("4.00"))


def test_avg_length_rounds_half_up():
    # lengths 1 and 2 -> 1.5 exactly; lengths 1,1,1,1,1,1,1,2 -> 1.125 -> 1.13
    text = "a\tO\n\n" * 7 + "a\tO\nb\tO\n\n"
    assert corpus_stats(parse_conll(text)).avg_length == Decimal("1.13")


def test_distribution_all_outside():
    per_type, per_group = entity_distribution(parse_conll("a\tO\n\n"))
    assert set(per_type.values()) == {0}
    assert set(per_group.values()) == {0}


def test_fixture_hand_counts(fixture_corpus):
    # Counted with awk over the raw file, not with this package.
    report = corpus_stats(fixture_corpus)
    assert report.sentence_count == 50
    assert report.sentences_with_entity == 28
    assert report.total_entities == 35
    assert report.max_length == 12
    assert report.avg_length == Decimal("8.28")
    per_type, per_group = entity_distribution(fixture_corpus)
    assert per_type[entity_type("Application_Usage")] == 9
    assert per_type[entity_type("PlugIn_Usage")] == 6
    assert per_type[entity_type("SoftwareCoreference_Deposition")] == 1
    assert per_group == {
        EntityGroup.Application: 15,
        EntityGroup.OperatingSystem: 3,
        EntityGroup.PlugIn: 10,
        EntityGroup.ProgrammingEnvironment: 6,
        EntityGroup.SoftwareCoreference: 1,
    }


words = st.text(alphabet=st.characters(blacklist_categories=("Cs", "Cc", "Zl", "Zp")), min_size=1, max_size=6)
sentences = st.lists(st.tuples(words, st.sampled_from(FULL27_LABELS)), min_size=1, max_size=8)


@given(st.lists(sentences, min_size=1, max_size=5))
def test_serialize_parse_identity(rows):
    rows = [r for r in rows if not any(w.startswith("# sent_id = ") for w, _ in r)]
    if not rows:
        return
    corpus = Corpus.from_lists([([w for w, _ in r], [t for _, t in r]) for r in rows])
    text = serialize_conll(corpus)
    again = parse_conll(text)
    assert again == corpus
    assert serialize_conll(again) == text


@given(st.lists(sentences, min_size=1, max_size=6))
def test_stats_consistency(rows):
    corpus = Corpus.from_lists([([w for w, _ in r], [t for _, t in r]) for r in rows])
    report = corpus_stats(corpus)
    assert report.sentences_with_entity == sum(1 for s in corpus if decode_bio(s.tags))
    assert report.sentences_with_entity <= report.sentence_count
    assert sum(report.per_type_counts.values()) == report.total_entities
    # independent recount: every span opens at a B or at an I that cannot continue
    recount = 0
    for s in corpus:
        prev = "O"
        for label in s.tags.labels:
            if label.startswith("B-") or (label.startswith("I-") and prev[2:] != label[2:]):
                recount += 1
            prev = label
    assert recount == report.total_entities
