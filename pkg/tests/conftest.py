from importlib import resources

import pytest

from cascade_ner import Corpus, parse_conll


@pytest.fixture(scope="session")
def fixture_path():
    return resources.files("cascade_ner") / "data" / "fixture.conll"


@pytest.fixture(scope="session")
def fixture_corpus(fixture_path):
    return parse_conll(fixture_path.read_text(encoding="utf-8"))


@pytest.fixture
def celeste():
    """The running example sentence with its two entities."""
    return Corpus.from_lists([(
        ["Celeste", "was", "written", "in", "C", "#"],
        ["B-Application_Creation", "O", "O", "O",
         "B-ProgrammingEnvironment_Usage", "I-ProgrammingEnvironment_Usage"],
    )])
