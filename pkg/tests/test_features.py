import pytest

from cascade_ner.corpus import Sentence
from cascade_ner.features import (
    SpanQuery,
    feature_hash,
    featurize_sentence,
    featurize_span_query,
    featurize_token,
    word_shape,
)
from cascade_ner.spans import Span

CELESTE = Sentence.from_words("Celeste was written in C #".split())


def test_token_templates():
    s = Sentence.from_words(["We", "used", "SPSS", "here"])
    fv = featurize_token(s, 2)
    for name in ("w=SPSS", "lw=spss", "shape=XXXX", "allcaps=1", "cap=1",
                 "p3=SPS", "s1=S", "w[-1]=used", "w[-2]=We", "w[+1]=here", "w[+2]=<EOS>"):
        assert name in fv
    assert "digit=1" not in fv


def test_single_token_sentinels():
    fv = featurize_token(Sentence.from_words(["R"]), 0)
    assert "w[-1]=<BOS>" in fv
    assert "w[+1]=<EOS>" in fv


def test_token_index_out_of_range():
    with pytest.raises(IndexError):
        featurize_token(CELESTE, len(CELESTE))


@pytest.mark.parametrize("word,shape", [("SPSS", "XXXX"), ("lme4", "xxxd"), ("C#", "X#"), ("G*Power", "X*Xxxxx")])
def test_word_shape(word, shape):
    assert word_shape(word) == shape


def test_sentence_bag():
    fv = featurize_sentence(CELESTE)
    assert "w=Celeste" in fv
    assert "bg=in|c" in fv
    assert "bg=<BOS>|celeste" in fv
    assert featurize_sentence(CELESTE) == fv


def test_span_query_features():
    q = SpanQuery.from_span(CELESTE, Span(4, 6))
    assert q.prompt == "What is C # in the sentence: Celeste was written in C #"
    fv = featurize_span_query(q)
    assert "span=C #" in fv
    assert "left-1=in" in fv
    assert "len=2" in fv
    assert "right+1=<EOS>" in fv


def test_whole_sentence_span_sentinels():
    fv = featurize_span_query(SpanQuery.from_span(CELESTE, Span(0, 6)))
    assert "left-1=<BOS>" in fv
    assert "right+1=<EOS>" in fv


def test_hash_is_stable_64_bit():
    h = feature_hash("w=SPSS")
    assert 0 <= h < 2 ** 64
    assert h == feature_hash("w=SPSS")
    assert h != feature_hash("w=spss")
    ids = featurize_token(CELESTE, 0).ids
    assert list(ids) == sorted(set(ids.tolist()))
